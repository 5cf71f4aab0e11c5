"""Pedersen commitments on G1 and Fiat-Shamir proofs of knowledge of an opening."""

from dataclasses import dataclass

from .algebra import G1, Q, g1_multi_exp
from .algebra.encoding import Writer, Reader, DecodeError
from .algebra.hashing import hash_to_challenge

POK_TAG = b"pok-opening"


@dataclass(frozen=True)
class Opening:
    v: int
    r: int


@dataclass(frozen=True)
class OpeningProof:
    a: G1
    c: int
    z_v: int
    z_r: int

    def to_bytes(self):
        return Writer().element(self.a).scalar(self.c).scalar(self.z_v).scalar(self.z_r).getvalue()

    @classmethod
    def read(cls, r):
        return cls(r.element(), r.scalar(), r.scalar(), r.scalar())

    @classmethod
    def from_bytes(cls, data):
        r = Reader(data)
        proof = cls.read(r)
        r.expect_end()
        return proof


def commit(params, v, r):
    return g1_multi_exp([params.g1, params.h1], [v % Q, r % Q])


def _challenge(params, gamma, a):
    body = Writer().raw(params.generator_bytes()).element(gamma).element(a).getvalue()
    return hash_to_challenge(POK_TAG, body)


def prove_opening(params, gamma, opening, rng):
    if commit(params, opening.v, opening.r) != gamma:
        raise ValueError("opening does not match the commitment")
    k_v, k_r = rng.scalar(), rng.scalar()
    a = commit(params, k_v, k_r)
    c = _challenge(params, gamma, a)
    return OpeningProof(a, c, (k_v - c * opening.v) % Q, (k_r - c * opening.r) % Q)


def verify_opening(params, gamma, proof):
    """Accept iff a = gamma^c g1^z_v h1^z_r and c hashes (gamma, a)."""
    try:
        if not isinstance(gamma, G1) or not isinstance(proof, OpeningProof):
            return False
        if not isinstance(proof.a, G1):
            return False
        if not all(isinstance(s, int) and 0 <= s < Q for s in (proof.c, proof.z_v, proof.z_r)):
            return False
        if _challenge(params, gamma, proof.a) != proof.c:
            return False
        rhs = g1_multi_exp([gamma, params.g1, params.h1], [proof.c, proof.z_v, proof.z_r])
        return rhs == proof.a
    except (ValueError, TypeError, DecodeError):
        return False
