"""Distributed batched reverse set membership (DB-RSM).

For each output v'_j with j in J the querier learns whether it was committed
by one of the gamma_i with i in I.

The querier checks every sender's opening proof for i in I and hands out
quasi-BBS+ signatures (S_i, c_i, r_hat_i) on those commitments, with the
identity element standing in for S_i elsewhere.  The servers fold the
sender-supplied encryption of r_i into r_hat_i, which turns each
quasi-signature into an encrypted BBS+ signature on v_i, then shuffle all
three components forward through the mix.  Blinding is additive here:
S gains g1^bS and the Paillier components gain bc and br padded by a
multiple of q so the blinded integers leak nothing about c or r.

Stage 2 proves, for each j in J, that the servers can unblind the
published (S~, c~, r~) into a valid BBS+ signature on v'_j.  The product
bS*bc is handled by committing to bS in z1 and proving consistency of the
Beaver products delta1 = bS*bc and delta2 = delta0*bc.
"""

from dataclasses import dataclass

from ..algebra import G1, GT, Q, pairing, multi_pairing
from ..algebra.encoding import Writer
from ..commitments import verify_opening
from ..dpk import (Predicate, Equation, DPKTranscript, dpk_round1, dpk_round2, dpk_challenge,
                   combine_first_messages, dpk_verify)
from ..rng import Rng
from ..sharing import deal_triples, mult
from ..signatures import (bbsplus_keygen, quasi_sign_with, verq, bbs_fake_S, QuasiBBSPlusSignature,
                          DegenerateMessageError)
from ..threshold.elgamal import EGScheme, eg_enc, eg_enc_with, eg_partial_decrypt, eg_combine
from ..threshold.paillier import (PaiScheme, pai_enc, pai_enc_with, pai_add, pai_partial_decrypt,
                                  pai_combine, check_no_wraparound, ciphertext_to_bytes)
from ..threshold.shuffle import shuffle
from .common import Env, QuerierCheckError, SenderProofError, server_name, QUERIER, index_context
from .dbsm import _tampered_perm

PROTOCOL = b"p_BBS+"


def wrap_bound(m, q=Q):
    """Every blinded c or r plaintext stays below this; it must also stay below N."""
    return (m + 2) * q * q


@dataclass
class RSMRun:
    I: frozenset
    J: frozenset
    y: object
    quasi: list
    S_tilde: list
    c_tilde: list
    r_tilde: list
    z1_shares: dict
    proofs: dict
    verdicts: dict
    accepted: frozenset
    internals: dict = None

    def write(self, w):
        w.index_set(self.I).index_set(self.J).element(self.y)
        w.u32(len(self.quasi))
        for s in self.quasi:
            w.element(s.S).scalar(s.c).scalar(s.r_hat)
        for S, c, r in zip(self.S_tilde, self.c_tilde, self.r_tilde):
            w.element(S).scalar(c).scalar(r)
        w.u32(len(self.proofs))
        for j in sorted(self.proofs):
            w.u32(j).u8(1 if self.verdicts[j] else 0).u32(len(self.z1_shares[j]))
            for z in self.z1_shares[j]:
                w.element(z)
            w.raw(self.proofs[j].to_bytes())
        w.index_set(self.accepted)

    @classmethod
    def read(cls, r):
        I, J = r.index_set(), r.index_set()
        y = r.element()
        n = r.u32()
        quasi = [QuasiBBSPlusSignature(r.element(), r.scalar(), r.scalar()) for _ in range(n)]
        St, ct, rt = [], [], []
        for _ in range(n):
            St.append(r.element())
            ct.append(r.scalar())
            rt.append(r.scalar())
        z1, proofs, verdicts = {}, {}, {}
        for _ in range(r.u32()):
            j = r.u32()
            verdicts[j] = bool(r.u8())
            z1[j] = tuple(r.element() for _ in range(r.u32()))
            proofs[j] = DPKTranscript.read(r)
        return cls(I, J, y, quasi, St, ct, rt, z1, proofs, verdicts, r.index_set())


class RSMConstants:
    """h1 = e(h1, f2)^-1, h2 = e(g1, f2)^-1 and h3 = fT, shared by every index."""

    def __init__(self, params):
        self.h1 = pairing(params.h1, params.f2).inverse()
        self.h2 = pairing(params.g1, params.f2).inverse()
        self.h3 = params.fT


def rsm_statement(params, y, S_t, c_t, r_t, v_j):
    """(z2, g1, g2) for one output index."""
    y_c = y * params.f2 ** c_t
    base = params.f1 * params.g1 ** v_j * params.h1 ** r_t
    z2 = multi_pairing([(S_t, y_c), (base.inverse(), params.f2)])
    return z2, pairing(S_t, params.f2), pairing(params.g1, y_c)


def rsm_predicate(params, context, j, z1, statement, consts=None):
    """p_BBS+ for index j; witness slots (bS, bc, br, delta0, delta1, delta2)."""
    consts = consts or RSMConstants(params)
    z2, gg1, gg2 = statement
    return Predicate(
        PROTOCOL,
        index_context(context, j),
        (
            Equation(z1, ((consts.h2, 0), (consts.h3, 3))),
            Equation(GT.identity(), ((z1.inverse(), 1), (consts.h2, 4), (consts.h3, 5))),
            Equation(z2, ((gg1, 1), (gg2, 0), (consts.h1, 2), (consts.h2, 4))),
        ),
        6,
    )


def querier_quasi_signatures(params, gammas, I, rng):
    while True:
        key = bbsplus_keygen(params, rng)
        cs = [rng.scalar() for _ in gammas]
        r_hats = [rng.scalar() for _ in gammas]
        try:
            quasi = [quasi_sign_with(params, key, g, c, rh) if i in I
                     else QuasiBBSPlusSignature(bbs_fake_S(), c, rh)
                     for i, (g, c, rh) in enumerate(zip(gammas, cs, r_hats))]
        except DegenerateMessageError:
            continue
        return key, quasi


def check_quasi_signatures(params, pk_G, pk_Z, gammas, I, y, quasi, cts, rand):
    """Index of the first bad slot, or None."""
    fake = bbs_fake_S()
    for i, (g, s, (eS, ec, er), (rS, ac, ar)) in enumerate(zip(gammas, quasi, cts, rand)):
        if not (0 <= s.c < Q and 0 <= s.r_hat < Q):
            return i
        if i in I:
            if not verq(params, s, g, y):
                return i
        elif s.S != fake:
            return i
        if eg_enc_with(params, pk_G, s.S, rS) != eS:
            return i
        if pai_enc_with(pk_Z, s.c, ac) != ec or pai_enc_with(pk_Z, s.r_hat, ar) != er:
            return i
    return None


def db_rsm(params, pk_G, pk_Z, gammas, rho_gammas, eps_r, v_prime, I, J, servers, querier_rng,
           env=None, dealer_rng=None):
    env = env or Env()
    bus, timer, hooks = env.bus, env.timer, env.hooks
    n, m = len(gammas), len(servers)
    I, J = frozenset(I), frozenset(J)
    if len(v_prime) != n or len(eps_r) != n or len(rho_gammas) != n:
        raise ValueError("input lists differ in length")
    if not I <= frozenset(range(n)) or not J <= frozenset(range(n)):
        raise ValueError("index sets must lie in range(n)")
    bound = wrap_bound(m)
    if bound >= pk_Z.N:
        raise ValueError("Paillier modulus too small for integer blinding without wraparound")
    dealer_rng = dealer_rng or Rng()

    # ---- stage 1: quasi-signatures
    with timer.phase("signing", QUERIER):
        for i in sorted(I):
            if not verify_opening(params, gammas[i], rho_gammas[i]):
                raise SenderProofError(i)
        key, quasi = querier_quasi_signatures(params, gammas, I, querier_rng)
        cts, rand = [], []
        for s in quasi:
            eS, rS = eg_enc(params, pk_G, s.S, querier_rng, return_randomness=True)
            ec, ac = pai_enc(pk_Z, s.c, querier_rng, return_randomness=True)
            er, ar = pai_enc(pk_Z, s.r_hat, querier_rng, return_randomness=True)
            cts.append((eS, ec, er))
            rand.append((rS, ac, ar))
        w = Writer().element(key.y)
        for s, (eS, ec, er), (rS, ac, ar) in zip(quasi, cts, rand):
            w.element(s.S).scalar(s.c).scalar(s.r_hat).raw(eS.to_bytes()).scalar(rS)
            w.blob(ciphertext_to_bytes(pk_Z, ec)).bigint(ac).blob(ciphertext_to_bytes(pk_Z, er)).bigint(ar)
        bus.broadcast("rsm.signatures", QUERIER, w.getvalue())

    with timer.phase("verifying", "server"):
        for srv in servers:
            bad = check_quasi_signatures(params, pk_G, pk_Z, gammas, I, key.y, quasi, cts, rand)
            if bad is not None:
                raise QuerierCheckError(f"server {srv.k} rejects the querier's quasi-signature at slot {bad}")
        eps_S = [c[0] for c in cts]
        eps_c = [c[1] for c in cts]
        eps_rr = [pai_add(pk_Z, c[2], er) for c, er in zip(cts, eps_r)]

    # ---- forward shuffle of all three components
    with timer.phase("shuffle", "server"):
        perms = [list(s.perm) for s in servers]
        for t, srv in enumerate(servers):
            for idx in range(n):
                if hooks.fires("rsm.shuffle.perm", srv.k, idx):
                    perms[t] = _tampered_perm(perms[t], perms[t + 1:], idx)
        schemes = [EGScheme(params, pk_G), PaiScheme(pk_Z), PaiScheme(pk_Z)]
        sh_S, sh_c, sh_r = shuffle(schemes, [eps_S, eps_c, eps_rr], perms, [s.rng for s in servers],
                                   parties=[server_name(s.k) for s in servers], bus=bus, phase="rsm.shuffle")

    # ---- homomorphic blinding
    with timer.phase("blinding", "server"):
        bS, bc, br = [], [], []
        for srv in servers:
            bS_k = [srv.rng.scalar() for _ in range(n)]
            bc_k = [srv.rng.scalar() for _ in range(n)]
            br_k = [srv.rng.scalar() for _ in range(n)]
            bS.append(bS_k)
            bc.append(bc_k)
            br.append(br_k)
            w = Writer()
            for j in range(n):
                S_plain = params.g1 ** bS_k[j]
                if hooks.fires("rsm.S.fake", srv.k, j):
                    sh_S[j] = eg_enc(params, pk_G, G1.identity(), srv.rng)
                e_bS = eg_enc(params, pk_G, S_plain, srv.rng)
                bc_used = hooks.perturb("rsm.blind.bc", srv.k, j, bc_k[j])
                e_bc = pai_enc(pk_Z, bc_used + Q * srv.rng.below(Q - 1), srv.rng)
                e_br = pai_enc(pk_Z, br_k[j] + Q * srv.rng.below(Q - 1), srv.rng)
                sh_S[j] = sh_S[j] * e_bS
                sh_c[j] = pai_add(pk_Z, sh_c[j], e_bc)
                sh_r[j] = pai_add(pk_Z, sh_r[j], e_br)
                w.raw(e_bS.to_bytes()).blob(ciphertext_to_bytes(pk_Z, e_bc)).blob(ciphertext_to_bytes(pk_Z, e_br))
            bus.broadcast("rsm.blind", server_name(srv.k), w.getvalue())

    # ---- threshold decryption
    with timer.phase("decryption", "server"):
        S_t, c_t, r_t = [], [], []
        for j in range(n):
            S_parts = {s.k: eg_partial_decrypt(sh_S[j], s.sk_G) for s in servers}
            c_parts = {s.k: pai_partial_decrypt(pk_Z, sh_c[j], s.sk_Z) for s in servers}
            r_parts = {s.k: pai_partial_decrypt(pk_Z, sh_r[j], s.sk_Z) for s in servers}
            S_t.append(eg_combine(sh_S[j], S_parts, m))
            c_t.append(check_no_wraparound(pk_Z, pai_combine(pk_Z, c_parts, m), bound) % Q)
            r_t.append(check_no_wraparound(pk_Z, pai_combine(pk_Z, r_parts, m), bound) % Q)
        w = Writer()
        for S, c, r in zip(S_t, c_t, r_t):
            w.element(S).scalar(c).scalar(r)
        bus.broadcast("rsm.sigma_tilde", "servers", w.getvalue())

    # ---- stage 2
    consts = RSMConstants(params)
    triples = deal_triples(m, 2 * len(J), dealer_rng)
    proofs, verdicts, z1_record = {}, {}, {}
    deltas = {}
    for t_idx, j in enumerate(sorted(J)):
        with timer.phase("DPK prove", "server"):
            bS_j = [bS[k][j] for k in range(m)]
            bc_j = [bc[k][j] for k in range(m)]
            br_j = [br[k][j] for k in range(m)]
            d0 = [s.rng.scalar() for s in servers]
            d1 = mult(bS_j, bc_j, triples[2 * t_idx], bus, phase="rsm.mult")
            d2 = mult(d0, bc_j, triples[2 * t_idx + 1], bus, phase="rsm.mult")
            d1 = [hooks.perturb("rsm.mult.delta1", servers[k].k, j, d1[k]) for k in range(m)]
            z1_shares = tuple(consts.h2 ** bS_j[k] * consts.h3 ** d0[k] for k in range(m))
            for srv, z in zip(servers, z1_shares):
                bus.broadcast("rsm.z1", server_name(srv.k), z.to_bytes())
            z1 = z1_shares[0]
            for z in z1_shares[1:]:
                z1 = z1 * z
            v_stmt = (v_prime[j] + 1) % Q if hooks.fires("rsm.dpk.statement", None, j) else v_prime[j]
            pred = rsm_predicate(params, env.context, j, z1,
                                 rsm_statement(params, key.y, S_t[j], c_t[j], r_t[j], v_stmt), consts)
            states, a_shares = [], []
            for k, srv in enumerate(servers):
                wit = [bS_j[k], bc_j[k], br_j[k], d0[k], d1[k], d2[k]]
                wit = hooks.perturb("rsm.dpk.witness", srv.k, j, wit)
                st, a = dpk_round1(pred, wit, srv.rng)
                states.append(st)
                a_shares.append(a)
                bus.broadcast("rsm.dpk.a", server_name(srv.k), b"".join(x.to_bytes() for x in a))
            c = dpk_challenge(pred, combine_first_messages(a_shares))
            z_shares = []
            for st, srv in zip(states, servers):
                z = hooks.perturb("rsm.dpk.z", srv.k, j, dpk_round2(st, c))
                z_shares.append(tuple(z))
                bus.send("rsm.dpk.z", server_name(srv.k), QUERIER, b"".join(v.to_bytes(32, "big") for v in z))
            proof = DPKTranscript(tuple(a_shares), c, tuple(z_shares))
            if env.whitebox:
                deltas[j] = (sum(d0) % Q, sum(d1) % Q, sum(d2) % Q)
        with timer.phase("DPK verify", QUERIER):
            q_z1 = z1_shares[0]
            for z in z1_shares[1:]:
                q_z1 = q_z1 * z
            q_pred = rsm_predicate(params, env.context, j, q_z1,
                                   rsm_statement(params, key.y, S_t[j], c_t[j], r_t[j], v_prime[j]), consts)
            proofs[j] = proof
            verdicts[j] = dpk_verify(q_pred, proof)
            z1_record[j] = z1_shares

    accepted = frozenset(j for j, ok in verdicts.items() if ok)
    internals = None
    if env.whitebox:
        internals = {
            "x": key.x,
            "bS": [sum(col) % Q for col in zip(*bS)],
            "bc": [sum(col) % Q for col in zip(*bc)],
            "br": [sum(col) % Q for col in zip(*br)],
            "deltas": deltas,
        }
    return RSMRun(I, J, key.y, quasi, S_t, c_t, r_t, z1_record, proofs, verdicts, accepted, internals)


def verify_rsm_run(params, context, gammas, rho_gammas, v_prime, run):
    """Offline re-check of one recorded DB-RSM run; None when consistent."""
    n = len(gammas)
    if len(run.quasi) != n or len(run.S_tilde) != n:
        return "signature lists have the wrong length"
    for i in sorted(run.I):
        if not verify_opening(params, gammas[i], rho_gammas[i]):
            return f"sender opening proof {i} does not verify"
    fake = bbs_fake_S()
    for i, s in enumerate(run.quasi):
        if i in run.I:
            if not verq(params, s, gammas[i], run.y):
                return f"quasi-signature at slot {i} does not verify"
        elif s.S != fake:
            return f"slot {i} outside I does not carry the fixed fake quasi-signature"
    if set(run.proofs) != set(run.J) or set(run.z1_shares) != set(run.J):
        return "proof set does not match J"
    consts = RSMConstants(params)
    for j in sorted(run.J):
        shares = run.z1_shares[j]
        if not shares:
            return f"index {j}: no z1 shares"
        z1 = shares[0]
        for z in shares[1:]:
            z1 = z1 * z
        pred = rsm_predicate(params, context, j, z1,
                             rsm_statement(params, run.y, run.S_tilde[j], run.c_tilde[j], run.r_tilde[j],
                                           v_prime[j]), consts)
        ok = dpk_verify(pred, run.proofs[j])
        if ok != run.verdicts[j]:
            return f"index {j}: recorded verdict {run.verdicts[j]} but proof re-verifies as {ok}"
    if run.accepted != frozenset(j for j in run.J if run.verdicts[j]):
        return "accepted set does not match the verdicts"
    return None
