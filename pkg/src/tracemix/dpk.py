"""Distributed Fiat-Shamir proofs of knowledge for product-of-powers predicates.

A predicate is a conjunction of equations y_i = prod_j g_ij^w_j over G1, G2
or GT.  Each of the m provers holds additive shares of every witness slot w_j.
Provers publish a-shares built from nonces only, all of them derive the same
challenge from the predicate and the combined a_i, and each sends its
responses z_j^(k) = r_j^(k) - c w_j^(k) to the verifier alone.

Negative exponents are written with an inverted base so every witness slot is
an ordinary scalar.
"""

from dataclasses import dataclass

from .algebra import G1, G2, GT, Q, g1_multi_exp, g2_multi_exp, gt_multi_exp
from .algebra.encoding import Writer, Reader, group_id, GID_G1, GID_G2, GID_GT, DecodeError
from .algebra.hashing import hash_to_challenge


class NonceReuseError(RuntimeError):
    """Round two was asked twice of the same nonces."""


_MEXP = {GID_G1: g1_multi_exp, GID_G2: g2_multi_exp, GID_GT: gt_multi_exp}
_IDENTITY = {GID_G1: G1.identity, GID_G2: G2.identity, GID_GT: GT.identity}


@dataclass(frozen=True)
class Equation:
    target: object
    terms: tuple  # ((base, slot), ...)

    @property
    def gid(self):
        return group_id(self.target)


@dataclass(frozen=True)
class Predicate:
    name: bytes
    context: bytes
    equations: tuple
    n_slots: int

    def __post_init__(self):
        for eq in self.equations:
            gid = eq.gid
            for base, slot in eq.terms:
                if group_id(base) != gid:
                    raise ValueError("all elements of one equation must share a group")
                if not 0 <= slot < self.n_slots:
                    raise ValueError("witness slot out of range")

    def to_bytes(self):
        w = Writer().blob(self.name).blob(self.context).u32(len(self.equations)).u32(self.n_slots)
        for eq in self.equations:
            w.u8(eq.gid).element(eq.target).u32(len(eq.terms))
            for base, slot in eq.terms:
                w.element(base).u32(slot)
        return w.getvalue()


@dataclass(frozen=True)
class DPKTranscript:
    a_shares: tuple  # per party, one element per equation
    c: int
    z_shares: tuple  # per party, one scalar per witness slot

    @property
    def m(self):
        return len(self.a_shares)

    def to_bytes(self):
        m = len(self.a_shares)
        ell = len(self.a_shares[0]) if m else 0
        ell2 = len(self.z_shares[0]) if m else 0
        w = Writer().u32(m).u32(ell).u32(ell2)
        for party in self.a_shares:
            for a in party:
                w.element(a)
        w.scalar(self.c)
        for party in self.z_shares:
            for z in party:
                w.scalar(z)
        return w.getvalue()

    @classmethod
    def read(cls, r):
        start = r.offset
        m, ell, ell2 = r.u32(), r.u32(), r.u32()
        if m > 64 or ell > 64 or ell2 > 64:
            raise DecodeError("implausible proof dimensions", start)
        a = tuple(tuple(r.element() for _ in range(ell)) for _ in range(m))
        c = r.scalar()
        z = tuple(tuple(r.scalar() for _ in range(ell2)) for _ in range(m))
        return cls(a, c, z)


class ProverState:
    """One prover's witness shares and nonces for a single proof."""

    def __init__(self, predicate, witness_shares, nonces):
        self.predicate = predicate
        self.witness = list(witness_shares)
        self.nonces = list(nonces)
        self.answered = False


def first_message(predicate, nonces):
    return tuple(
        _MEXP[eq.gid]([b for b, _ in eq.terms], [nonces[s] for _, s in eq.terms])
        for eq in predicate.equations
    )


def dpk_round1(predicate, witness_shares, rng):
    """Sample nonces and return (state, a-shares).  The a-shares never touch the witness."""
    if len(witness_shares) != predicate.n_slots:
        raise ValueError("one witness share per slot")
    nonces = [rng.scalar() for _ in range(predicate.n_slots)]
    return ProverState(predicate, witness_shares, nonces), first_message(predicate, nonces)


def combine_first_messages(a_shares):
    ell = len(a_shares[0])
    out = []
    for i in range(ell):
        acc = a_shares[0][i]
        for party in a_shares[1:]:
            acc = acc * party[i]
        out.append(acc)
    return tuple(out)


def dpk_challenge(predicate, combined_a):
    w = Writer().raw(predicate.to_bytes())
    for a in combined_a:
        w.element(a)
    return hash_to_challenge(b"dpk/" + predicate.name, w.getvalue())


def response(r, c, w, q=Q):
    return (r - c * w) % q


def dpk_round2(state, c, q=Q):
    if state.answered:
        raise NonceReuseError("these nonces already answered a challenge")
    state.answered = True
    return tuple(response(r, c, w, q) for r, w in zip(state.nonces, state.witness))


def dpk_verify(predicate, transcript):
    """Recompute the challenge and check a_i = y_i^c prod_j g_ij^z_j for every equation."""
    try:
        m = len(transcript.a_shares)
        if m == 0 or len(transcript.z_shares) != m:
            return False
        ell = len(predicate.equations)
        if any(len(a) != ell for a in transcript.a_shares):
            return False
        if any(len(z) != predicate.n_slots for z in transcript.z_shares):
            return False
        for party, a in enumerate(transcript.a_shares):
            for eq, ai in zip(predicate.equations, a):
                if group_id(ai) != eq.gid:
                    return False
        combined = combine_first_messages(transcript.a_shares)
        if dpk_challenge(predicate, combined) != transcript.c:
            return False
        z = [sum(party[j] for party in transcript.z_shares) % Q for j in range(predicate.n_slots)]
        c = transcript.c
        for eq, ai in zip(predicate.equations, combined):
            bases = [eq.target] + [b for b, _ in eq.terms]
            exps = [c] + [z[s] for _, s in eq.terms]
            if _MEXP[eq.gid](bases, exps) != ai:
                return False
        return True
    except (TypeError, ValueError):
        return False


def run_dpk(predicate, witness_by_party, rngs):
    """All provers honest and local; returns the transcript."""
    states, a_shares = [], []
    for shares, rng in zip(witness_by_party, rngs):
        st, a = dpk_round1(predicate, shares, rng)
        states.append(st)
        a_shares.append(a)
    c = dpk_challenge(predicate, combine_first_messages(a_shares))
    z = tuple(dpk_round2(st, c) for st in states)
    return DPKTranscript(tuple(a_shares), c, z)
