"""Share channel: hashed ElGamal over G1 for sender-to-server scalar shares.

Any IND-CPA scheme works here.  A ciphertext is (g1^k, s XOR SHA-256(pk^k))
for a 32-byte scalar s.
"""

import hashlib
from dataclasses import dataclass

from ..algebra import G1, Q
from ..algebra.encoding import Writer


@dataclass(frozen=True)
class PKECiphertext:
    u: G1
    body: bytes

    def to_bytes(self):
        return Writer().element(self.u).raw(self.body).getvalue()

    @classmethod
    def read(cls, r):
        return cls(r.element(), r.take(32))


class PKEDecryptError(ValueError):
    pass


def _pad(shared):
    return hashlib.sha256(b"tracemix/pke" + shared.to_bytes()).digest()


def pke_keygen(params, rng):
    sk = rng.nonzero_scalar()
    return params.g1 ** sk, sk


def pke_enc(params, pk, s, rng):
    if not 0 <= s < Q:
        raise ValueError("share-channel plaintext must be a scalar")
    k = rng.nonzero_scalar()
    pad = _pad(pk ** k)
    body = bytes(a ^ b for a, b in zip(s.to_bytes(32, "big"), pad))
    return PKECiphertext(params.g1 ** k, body)


def pke_dec(sk, ct):
    pad = _pad(ct.u ** sk)
    s = int.from_bytes(bytes(a ^ b for a, b in zip(ct.body, pad)), "big")
    if s >= Q:
        raise PKEDecryptError("share ciphertext does not decrypt to a scalar")
    return s
