"""Distributed batched set membership (DB-SM).

For each commitment gamma_i with i in I the querier learns whether its
opening v_i appears among the mixed outputs v'_J, and nothing else.

Stage 1: the querier signs v'_j for j in J with a fresh Boneh-Boyen key and
publishes g1 for every other j, together with ElGamal encryptions of the
whole list.  The servers shuffle those encryptions backwards through the mix
(last server first, each with its inverted permutation), so slot i ends up
holding the signature that belongs to gamma_i.  Each server raises every
slot to its own random blinding share, the contributions are multiplied and
threshold-decrypted into sigma~_i = sigma_i^b_i.

Stage 2: for every i in I the servers run a distributed proof that they
know shares of (v, r, b) with gamma_i = g1^v h1^r and
e(sigma~_i, y) = e(g1, g2)^b * e(sigma~_i, g2)^(-v).  That second equation
holds exactly when sigma~_i is a blinded real signature on v_i.
"""

from dataclasses import dataclass

from ..algebra import G1, Q, pairing
from ..algebra.encoding import Writer
from ..dpk import (Predicate, Equation, DPKTranscript, dpk_round1, dpk_round2, dpk_challenge,
                   combine_first_messages, dpk_verify)
from ..signatures import bb_keygen, bb_sign, bb_verify, bb_fake, DegenerateMessageError
from ..threshold.elgamal import (EGScheme, eg_enc, eg_enc_with, eg_exp, eg_renc, eg_partial_decrypt,
                                 eg_combine)
from ..threshold.shuffle import shuffle, invert_permutation
from .common import Env, QuerierCheckError, server_name, QUERIER, index_context

PROTOCOL = b"p_BB"


@dataclass
class SMRun:
    I: frozenset
    J: frozenset
    y: object
    sigma_prime: list
    sigma_tilde: list
    proofs: dict
    verdicts: dict
    accepted: frozenset
    internals: dict = None

    def write(self, w):
        w.index_set(self.I).index_set(self.J).element(self.y)
        w.u32(len(self.sigma_prime))
        for s in self.sigma_prime:
            w.element(s)
        for s in self.sigma_tilde:
            w.element(s)
        w.u32(len(self.proofs))
        for i in sorted(self.proofs):
            w.u32(i).u8(1 if self.verdicts[i] else 0).raw(self.proofs[i].to_bytes())
        w.index_set(self.accepted)

    @classmethod
    def read(cls, r):
        I, J = r.index_set(), r.index_set()
        y = r.element()
        n = r.u32()
        sp = [r.element() for _ in range(n)]
        st = [r.element() for _ in range(n)]
        proofs, verdicts = {}, {}
        for _ in range(r.u32()):
            i = r.u32()
            verdicts[i] = bool(r.u8())
            proofs[i] = DPKTranscript.read(r)
        return cls(I, J, y, sp, st, proofs, verdicts, r.index_set())


def sm_predicate(params, context, i, gamma_i, sigma_tilde_i, y, e_g1g2=None):
    """p_BB for index i; witness slots (v, r, b)."""
    if e_g1g2 is None:
        e_g1g2 = pairing(params.g1, params.g2)
    return Predicate(
        PROTOCOL,
        index_context(context, i),
        (
            Equation(gamma_i, ((params.g1, 0), (params.h1, 1))),
            Equation(pairing(sigma_tilde_i, y), ((e_g1g2, 2), (pairing(sigma_tilde_i, params.g2).inverse(), 0))),
        ),
        3,
    )


def querier_signatures(params, v_prime, J, rng):
    """Fresh key, real signatures on v'_J and g1 everywhere else."""
    while True:
        key = bb_keygen(params, rng)
        try:
            sigs = [bb_sign(params, key, v) if j in J else bb_fake(params) for j, v in enumerate(v_prime)]
        except DegenerateMessageError:
            continue
        return key, sigs


def check_querier_signatures(params, pk_G, y, v_prime, J, sigs, cts, rhos):
    for j, (v, s, ct, rho) in enumerate(zip(v_prime, sigs, cts, rhos)):
        if j in J:
            if not bb_verify(params, y, v, s):
                return j
        elif s != bb_fake(params):
            return j
        if eg_enc_with(params, pk_G, s, rho) != ct:
            return j
    return None


def _tampered_perm(perm, later_hops, target):
    """Swap two entries of ``perm`` so that final slot ``target`` receives the wrong item."""
    n = len(perm)
    if n < 2:
        return list(perm)
    pos = target
    for h in reversed(later_hops):
        pos = h[pos]
    out = list(perm)
    other = (pos + 1) % n
    out[pos], out[other] = out[other], out[pos]
    return out


def db_sm(params, pk_G, gammas, v_prime, I, J, servers, querier_rng, env=None):
    env = env or Env()
    bus, timer, hooks = env.bus, env.timer, env.hooks
    n, m = len(gammas), len(servers)
    I, J = frozenset(I), frozenset(J)
    if len(v_prime) != n or not I <= frozenset(range(n)) or not J <= frozenset(range(n)):
        raise ValueError("index sets must lie in range(n)")

    # ---- stage 1: signature generation
    with timer.phase("signing", QUERIER):
        key, sigs = querier_signatures(params, v_prime, J, querier_rng)
        enc = [eg_enc(params, pk_G, s, querier_rng, return_randomness=True) for s in sigs]
        cts = [c for c, _ in enc]
        rhos = [rho for _, rho in enc]
        w = Writer().element(key.y)
        for s, c, rho in zip(sigs, cts, rhos):
            w.element(s).raw(c.to_bytes()).scalar(rho)
        bus.broadcast("sm.signatures", QUERIER, w.getvalue())

    with timer.phase("verifying", "server"):
        for srv in servers:
            bad = check_querier_signatures(params, pk_G, key.y, v_prime, J, sigs, cts, rhos)
            if bad is not None:
                raise QuerierCheckError(f"server {srv.k} rejects the querier's signature at slot {bad}")

    # ---- shuffle backwards through the mix
    with timer.phase("shuffle", "server"):
        order = list(reversed(servers))
        perms = [invert_permutation(s.perm) for s in order]
        for t, srv in enumerate(order):
            for idx in range(n):
                if hooks.fires("sm.shuffle.perm", srv.k, idx):
                    perms[t] = _tampered_perm(perms[t], perms[t + 1:], idx)
        (eps,) = shuffle([EGScheme(params, pk_G)], [cts], perms, [s.rng for s in order],
                         parties=[server_name(s.k) for s in order], bus=bus, phase="sm.shuffle")

    # ---- homomorphic blinding
    with timer.phase("blinding", "server"):
        b_shares = []
        contrib = []
        for srv in servers:
            bk = [srv.rng.scalar() for _ in range(n)]
            b_shares.append(bk)
            row = []
            for i in range(n):
                b_used = hooks.perturb("sm.blind.b", srv.k, i, bk[i])
                if hooks.fires("sm.sigma.fake", srv.k, i):
                    row.append(eg_enc(params, pk_G, params.g1 ** b_used, srv.rng))
                else:
                    row.append(eg_renc(params, pk_G, eg_exp(eps[i], b_used), srv.rng))
            contrib.append(row)
            bus.broadcast("sm.blind", server_name(srv.k), b"".join(c.to_bytes() for c in row))
        blinded = []
        for i in range(n):
            acc = contrib[0][i]
            for row in contrib[1:]:
                acc = acc * row[i]
            blinded.append(acc)

    # ---- threshold decryption
    with timer.phase("decryption", "server"):
        partials = []
        for srv in servers:
            row = [eg_partial_decrypt(ct, srv.sk_G) for ct in blinded]
            partials.append(row)
            bus.broadcast("sm.tdec", server_name(srv.k), b"".join(p.to_bytes() for p in row))
        sigma_tilde = [eg_combine(blinded[i], {s.k: partials[t][i] for t, s in enumerate(servers)}, m)
                       for i in range(n)]
        bus.broadcast("sm.sigma_tilde", "servers", b"".join(s.to_bytes() for s in sigma_tilde))

    # ---- stage 2: one distributed proof per i in I
    e_g1g2 = pairing(params.g1, params.g2)
    proofs, verdicts = {}, {}
    for i in sorted(I):
        with timer.phase("DPK prove", "server"):
            gamma_stmt = gammas[i] * params.g1 if hooks.fires("sm.dpk.statement", None, i) else gammas[i]
            pred = sm_predicate(params, env.context, i, gamma_stmt, sigma_tilde[i], key.y, e_g1g2)
            states, a_shares = [], []
            for t, srv in enumerate(servers):
                wit = [srv.v_shares[i], srv.r_shares[i], b_shares[t][i]]
                wit = hooks.perturb("sm.dpk.witness", srv.k, i, wit)
                st, a = dpk_round1(pred, wit, srv.rng)
                states.append(st)
                a_shares.append(a)
                bus.broadcast("sm.dpk.a", server_name(srv.k), b"".join(x.to_bytes() for x in a))
            c = dpk_challenge(pred, combine_first_messages(a_shares))
            z_shares = []
            for st, srv in zip(states, servers):
                z = hooks.perturb("sm.dpk.z", srv.k, i, dpk_round2(st, c))
                z_shares.append(tuple(z))
                bus.send("sm.dpk.z", server_name(srv.k), QUERIER, b"".join(v.to_bytes(32, "big") for v in z))
            proof = DPKTranscript(tuple(a_shares), c, tuple(z_shares))
        with timer.phase("DPK verify", QUERIER):
            q_pred = sm_predicate(params, env.context, i, gammas[i], sigma_tilde[i], key.y, e_g1g2)
            proofs[i] = proof
            verdicts[i] = dpk_verify(q_pred, proof)

    accepted = frozenset(i for i, ok in verdicts.items() if ok)
    internals = None
    if env.whitebox:
        internals = {
            "x": key.x,
            "b": [sum(col) % Q for col in zip(*b_shares)],
        }
    return SMRun(I, J, key.y, sigs, sigma_tilde, proofs, verdicts, accepted, internals)


def verify_sm_run(params, context, gammas, v_prime, run):
    """Offline re-check of one recorded DB-SM run.

    Returns None when consistent, else a short description of the first fault.
    """
    n = len(gammas)
    if len(run.sigma_prime) != n or len(run.sigma_tilde) != n:
        return "signature lists have the wrong length"
    for j in range(n):
        s = run.sigma_prime[j]
        if j in run.J:
            if not bb_verify(params, run.y, v_prime[j], s):
                return f"querier signature at slot {j} does not verify"
        elif s != bb_fake(params):
            return f"slot {j} outside J does not carry the fixed fake signature"
    if set(run.proofs) != set(run.I):
        return "proof set does not match I"
    e_g1g2 = pairing(params.g1, params.g2)
    for i in sorted(run.I):
        pred = sm_predicate(params, context, i, gammas[i], run.sigma_tilde[i], run.y, e_g1g2)
        ok = dpk_verify(pred, run.proofs[i])
        if ok != run.verdicts[i]:
            return f"index {i}: recorded verdict {run.verdicts[i]} but proof re-verifies as {ok}"
    if run.accepted != frozenset(i for i in run.I if run.verdicts[i]):
        return "accepted set does not match the verdicts"
    return None


