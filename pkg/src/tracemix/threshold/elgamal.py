"""(m, m) threshold ElGamal over G1.

Each party samples its own key share; the public key is the product of the
parties' g1^sk.  Decryption needs every party's share c0^sk_k.
"""

from dataclasses import dataclass

from ..algebra import G1, Q
from ..algebra.encoding import Writer
from ..harness.bus import ProtocolError


@dataclass(frozen=True)
class EGCiphertext:
    c0: G1
    c1: G1

    def __mul__(self, other):
        return EGCiphertext(self.c0 * other.c0, self.c1 * other.c1)

    def to_bytes(self):
        return Writer().element(self.c0).element(self.c1).getvalue()

    @classmethod
    def read(cls, r):
        return cls(r.element(), r.element())


@dataclass(frozen=True)
class EGKeyMaterial:
    pk: G1
    shares: tuple


def eg_keygen(params, m, rngs):
    """``rngs[k]`` is party k's private randomness."""
    if len(rngs) != m:
        raise ValueError("one rng per party")
    shares = tuple(rng.scalar() for rng in rngs)
    pk = G1.identity()
    for sk in shares:
        pk = pk * params.g1 ** sk
    return EGKeyMaterial(pk, shares)


def eg_enc_with(params, pk, M, rho):
    return EGCiphertext(params.g1 ** rho, M * pk ** rho)


def eg_enc(params, pk, M, rng, return_randomness=False):
    rho = rng.scalar()
    ct = eg_enc_with(params, pk, M, rho)
    return (ct, rho) if return_randomness else ct


def eg_renc(params, pk, ct, rng):
    rho = rng.scalar()
    return EGCiphertext(ct.c0 * params.g1 ** rho, ct.c1 * pk ** rho)


def eg_exp(ct, b):
    return EGCiphertext(ct.c0 ** b, ct.c1 ** b)


def eg_mul(ct1, ct2):
    return ct1 * ct2


def eg_partial_decrypt(ct, sk_share):
    return ct.c0 ** sk_share


def eg_combine(ct, partials, m):
    """``partials`` maps party index to its share; all m must be present."""
    if sorted(partials) != list(range(m)):
        raise ProtocolError(f"threshold decryption needs shares from all {m} parties, got {sorted(partials)}")
    denom = G1.identity()
    for k in range(m):
        denom = denom * partials[k]
    return ct.c1 / denom


def eg_tdec(ct, shares):
    """Convenience: all parties' key shares held locally."""
    return eg_combine(ct, {k: eg_partial_decrypt(ct, sk) for k, sk in enumerate(shares)}, len(shares))


def eg_decrypt_with_key(ct, sk):
    return ct.c1 / ct.c0 ** (sk % Q)


class EGScheme:
    """ElGamal under one public key, in the shape the shuffle expects."""

    name = "elgamal"

    def __init__(self, params, pk):
        self.params = params
        self.pk = pk

    def renc(self, ct, rng):
        return eg_renc(self.params, self.pk, ct, rng)

    def encode(self, ct):
        return ct.to_bytes()
