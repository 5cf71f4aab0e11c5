import pytest

from tracemix.algebra import Q
from tracemix.commitments import commit, Opening
from tracemix.harness.bus import Bus
from tracemix.harness.oracle import trace_in_oracle, trace_out_oracle
from tracemix.rng import Rng
from tracemix.setmembership import db_sm, db_rsm, single_prover_sm, single_prover_rsm, SenderProofError
from tracemix.setmembership.common import Env
from tracemix.setmembership.dbsm import check_querier_signatures, verify_sm_run, querier_signatures
from tracemix.setmembership.dbrsm import verify_rsm_run, wrap_bound
from tracemix.signatures import BBSPlusSignature, bbsplus_verify
from tracemix.threshold.elgamal import eg_enc
from tracemix.threshold.shuffle import composed_permutation

from conftest import mixed_instance


def run_sm(mx, I, J, whitebox=False, bus=None, context=b"test/sm"):
    env = Env(context, bus, whitebox=whitebox)
    return db_sm(mx.params, mx.mpk.pk_G, mx.gammas, mx.v_prime, I, J, mx.servers(), mx.querier(), env)


def run_rsm(mx, I, J, whitebox=False, bus=None, context=b"test/rsm"):
    env = Env(context, bus, whitebox=whitebox)
    return db_rsm(mx.params, mx.mpk.pk_G, mx.mpk.pk_Z, mx.gammas, [c.rho_gamma for c in mx.cts],
                  [c.eps_r for c in mx.cts], mx.v_prime, I, J, mx.servers(), mx.querier(), env,
                  dealer_rng=mx.querier("dealer"))


def openings(mx):
    out = []
    for i in range(mx.n):
        r = sum(w.r_shares[i] for w in mx.witnesses) % Q
        out.append(Opening(mx.values[i], r))
    return out


# ------------------------------------------------------------ DB-SM

def test_sm_everything_accepted(mixed_small):
    everything = frozenset(range(mixed_small.n))
    run = run_sm(mixed_small, everything, everything)
    assert run.accepted == everything
    assert all(run.verdicts.values())


def test_sm_empty_J_rejects_all(mixed_small):
    everything = frozenset(range(mixed_small.n))
    run = run_sm(mixed_small, everything, frozenset())
    assert run.accepted == frozenset()
    assert set(run.verdicts) == everything


def test_sm_empty_I(mixed_small):
    run = run_sm(mixed_small, frozenset(), frozenset(range(mixed_small.n)))
    assert run.accepted == frozenset() and run.proofs == {}


@pytest.mark.parametrize("n,m,seed", [(5, 1, 1), (8, 3, 2), (10, 4, 3)])
def test_sm_random_vs_oracle(n, m, seed):
    mx = mixed_instance(n, m, seed)
    rng = Rng(seed)
    for _ in range(2):
        I, J = rng.subset(n), rng.subset(n)
        run = run_sm(mx, I, J)
        want = trace_in_oracle(mx.values, mx.v_prime, I, J)
        assert run.accepted == want
        assert {i: ok for i, ok in run.verdicts.items()} == {i: i in want for i in I}


def test_sm_blinded_signature_algebra(mixed_small):
    mx = mixed_small
    rng = Rng(b"lemma1")
    I, J = frozenset(range(mx.n)), rng.subset(mx.n)
    run = run_sm(mx, I, J, whitebox=True)
    x, b = run.internals["x"], run.internals["b"]
    members = trace_in_oracle(mx.values, mx.v_prime, I, J)
    for i in range(mx.n):
        if i in members:
            assert run.sigma_tilde[i] == mx.params.g1 ** (b[i] * pow(x + mx.values[i], -1, Q) % Q)
        else:
            assert run.sigma_tilde[i] == mx.params.g1 ** b[i]


def test_sm_run_reverifies_offline(mixed_small):
    mx = mixed_small
    run = run_sm(mx, frozenset(range(mx.n)), frozenset({0, 2}), context=b"ctx")
    assert verify_sm_run(mx.params, b"ctx", mx.gammas, mx.v_prime, run) is None
    assert verify_sm_run(mx.params, b"other", mx.gammas, mx.v_prime, run) is not None
    some = next(iter(run.accepted))
    run.verdicts[some] = False
    assert "recorded verdict" in verify_sm_run(mx.params, b"ctx", mx.gammas, mx.v_prime, run)


def test_sm_querier_signature_check(mixed_small):
    mx = mixed_small
    rng = Rng(b"qcheck")
    J = frozenset({1, 3})
    key, sigs = querier_signatures(mx.params, mx.v_prime, J, rng)
    enc = [eg_enc(mx.params, mx.mpk.pk_G, s, rng, return_randomness=True) for s in sigs]
    cts, rhos = [c for c, _ in enc], [r for _, r in enc]
    assert check_querier_signatures(mx.params, mx.mpk.pk_G, key.y, mx.v_prime, J, sigs, cts, rhos) is None
    bad = list(sigs)
    bad[3] = bad[3] * mx.params.g1
    assert check_querier_signatures(mx.params, mx.mpk.pk_G, key.y, mx.v_prime, J, bad, cts, rhos) == 3
    # a real signature smuggled into a slot outside J
    bad = list(sigs)
    bad[0] = sigs[1]
    assert check_querier_signatures(mx.params, mx.mpk.pk_G, key.y, mx.v_prime, J, bad, cts, rhos) == 0


def test_z_shares_only_reach_the_querier(mixed_small):
    mx = mixed_small
    bus = Bus(b"vis", keep_log=True)
    everything = frozenset(range(mx.n))
    run_sm(mx, everything, frozenset({0, 1}), bus=bus)
    run_rsm(mx, everything, frozenset({0, 1}), bus=bus)
    z_msgs = [m for m in bus.log if m.phase.endswith("dpk.z")]
    assert z_msgs and all(m.recipient == "querier" for m in z_msgs)
    for k in range(mx.m):
        role = f"server{k}"
        seen = [m for m in bus.visible_to(role) if m.phase.endswith("dpk.z")]
        assert all(m.sender == role for m in seen)
    assert len([m for m in bus.visible_to("querier") if m.phase.endswith("dpk.z")]) == len(z_msgs)


# ------------------------------------------------------------ DB-RSM

def test_rsm_everything_accepted(mixed_small):
    everything = frozenset(range(mixed_small.n))
    run = run_rsm(mixed_small, everything, everything)
    assert run.accepted == everything


def test_rsm_empty_I_rejects_all(mixed_small):
    everything = frozenset(range(mixed_small.n))
    run = run_rsm(mixed_small, frozenset(), everything)
    assert run.accepted == frozenset()
    assert set(run.verdicts) == everything


@pytest.mark.parametrize("n,m,seed", [(5, 1, 1), (8, 3, 2), (10, 4, 3)])
def test_rsm_random_vs_oracle(n, m, seed):
    mx = mixed_instance(n, m, seed)
    rng = Rng(seed + 100)
    for _ in range(2):
        I, J = rng.subset(n), rng.subset(n)
        run = run_rsm(mx, I, J)
        want = trace_out_oracle(mx.values, mx.v_prime, I, J)
        assert run.accepted == want
        assert run.verdicts == {j: j in want for j in J}


def test_rsm_whitebox_unblinding(mixed_small):
    mx = mixed_small
    rng = Rng(b"lemma2")
    I, J = rng.subset(mx.n), frozenset(range(mx.n))
    run = run_rsm(mx, I, J, whitebox=True)
    wb = run.internals
    pi = composed_permutation([w.perm for w in mx.witnesses])
    ops = openings(mx)
    members = trace_out_oracle(mx.values, mx.v_prime, I, J)
    for j in range(mx.n):
        src = pi[j]
        # mod-q unblinding
        assert run.c_tilde[j] == (run.quasi[src].c + wb["bc"][j]) % Q
        assert run.r_tilde[j] == (run.quasi[src].r_hat + ops[src].r + wb["br"][j]) % Q
        # the unblinded triple is a BBS+ signature on v'_j exactly for members
        sig = BBSPlusSignature(run.S_tilde[j] * mx.params.g1 ** (-wb["bS"][j] % Q),
                               (run.c_tilde[j] - wb["bc"][j]) % Q, (run.r_tilde[j] - wb["br"][j]) % Q)
        assert bbsplus_verify(mx.params, run.y, mx.v_prime[j], sig) is (j in members)
        # products shared through Beaver multiplication
        d0, d1, d2 = wb["deltas"][j]
        assert d1 == wb["bS"][j] * wb["bc"][j] % Q
        assert d2 == d0 * wb["bc"][j] % Q


def test_rsm_rejects_bad_sender_proof(mixed_small):
    mx = mixed_small
    rhos = [c.rho_gamma for c in mx.cts]
    rhos[2] = rhos[3]
    with pytest.raises(SenderProofError) as err:
        db_rsm(mx.params, mx.mpk.pk_G, mx.mpk.pk_Z, mx.gammas, rhos, [c.eps_r for c in mx.cts], mx.v_prime,
               frozenset({2}), frozenset({0}), mx.servers(), mx.querier())
    assert err.value.index == 2


def test_rsm_run_reverifies_offline(mixed_small):
    mx = mixed_small
    run = run_rsm(mx, frozenset({0, 1, 2}), frozenset(range(mx.n)), context=b"ctx")
    rhos = [c.rho_gamma for c in mx.cts]
    assert verify_rsm_run(mx.params, b"ctx", mx.gammas, rhos, mx.v_prime, run) is None
    j = min(run.accepted)
    shares = list(run.z1_shares[j])
    shares[0] = shares[0] * mx.params.fT
    run.z1_shares[j] = tuple(shares)
    assert verify_rsm_run(mx.params, b"ctx", mx.gammas, rhos, mx.v_prime, run) is not None


def test_wrap_bound_fits_test_modulus(mixed_small):
    assert wrap_bound(4) < mixed_small.mpk.pk_Z.N


# ------------------------------------------------------------ single prover

def test_single_prover_sm(params):
    rng = Rng(b"single-sm")
    v, r = 1234, rng.scalar()
    gamma = commit(params, v, r)
    assert single_prover_sm(params, gamma, {1, 2, v}, Opening(v, r), rng.fork("a"))
    assert not single_prover_sm(params, gamma, {1, 2, 3}, Opening(v, r), rng.fork("b"))
    assert single_prover_sm(params, gamma, {v}, Opening(v, r), rng.fork("c"))
    assert not single_prover_sm(params, gamma, set(), Opening(v, r), rng.fork("d"))


def test_single_prover_rsm(params):
    rng = Rng(b"single-rsm")
    ops = [Opening(10 + i, rng.scalar()) for i in range(4)]
    gammas = [commit(params, o.v, o.r) for o in ops]
    assert single_prover_rsm(params, gammas, ops, 12, rng.fork("a"))
    assert not single_prover_rsm(params, gammas, ops, 99, rng.fork("b"))
    assert single_prover_rsm(params, gammas[:1], ops[:1], 10, rng.fork("c"))
