"""Dealer-keyed (m, m) threshold Paillier with g = N + 1.

Encryption uses the short-exponent form of Damgard, Jurik and Nielsen: the
public key carries h_s = h^N mod N^2 for a random square-like h, and a
ciphertext is (1 + N)^x * h_s^alpha with alpha of |N|/2 bits.  Because h_s is
fixed, its powers are served from a windowed table.

The decryption exponent d (d = 0 mod lambda, d = 1 mod N) is split into m
additive integer shares.  The first m - 1 shares are drawn 128 bits wider
than d, so any m - 1 of them are statistically independent of d; the last
share is d minus their sum and may be negative.
"""

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from ..harness.bus import ProtocolError

STAT_PAD = 128
_WINDOW = 8


class PlaintextRangeError(ValueError):
    """Plaintext outside [0, N)."""


class WraparoundError(ArithmeticError):
    """A homomorphic sum came back at or above its no-wraparound bound."""


@dataclass
class PaillierPublicKey:
    N: int
    h_s: int
    _table: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.N = mpz(self.N)
        self.h_s = mpz(self.h_s)
        self.N2 = self.N * self.N
        self.alpha_bits = (int(self.N).bit_length() + 1) // 2

    @property
    def bits(self):
        return int(self.N).bit_length()

    def ciphertext_bytes(self):
        return (int(self.N2).bit_length() + 7) // 8

    def _powers(self):
        if self._table is None:
            N2 = self.N2
            table = []
            base = self.h_s
            for _ in range((self.alpha_bits + _WINDOW - 1) // _WINDOW):
                row = [mpz(1), base]
                for _ in range((1 << _WINDOW) - 2):
                    row.append(row[-1] * base % N2)
                table.append(row)
                base = row[-1] * base % N2
            self._table = table
        return self._table

    def hs_pow(self, alpha):
        """h_s^alpha mod N^2 from the fixed-base table."""
        N2 = self.N2
        acc = mpz(1)
        mask = (1 << _WINDOW) - 1
        i = 0
        alpha = int(alpha)
        for row in self._powers():
            if not alpha:
                break
            digit = alpha & mask
            if digit:
                acc = acc * row[digit] % N2
            alpha >>= _WINDOW
            i += 1
        if alpha:
            acc = acc * gmpy2.powmod(self.h_s, mpz(alpha) << (_WINDOW * i), N2) % N2
        return acc

    def to_bytes(self):
        from ..algebra.encoding import Writer
        return Writer().bigint(int(self.N)).bigint(int(self.h_s)).getvalue()

    @classmethod
    def read(cls, r):
        return cls(r.bigint(), r.bigint())


@dataclass(frozen=True)
class PaillierKeyMaterial:
    pk: PaillierPublicKey
    shares: tuple


def _random_prime(bits, rng):
    while True:
        cand = mpz(rng.randbits(bits)) | (mpz(3) << (bits - 2)) | 1
        p = gmpy2.next_prime(cand)
        if p.bit_length() == bits:
            return p


def pai_keygen_dealer(bits, m, rng):
    """Dealer: modulus N of ``bits`` bits and m additive shares of d."""
    if m < 1:
        raise ValueError("need at least one party")
    if bits < 64 or bits % 2:
        raise ValueError("modulus size must be an even number of bits >= 64")
    half = bits // 2
    while True:
        p = _random_prime(half, rng)
        q = _random_prime(half, rng)
        if p == q:
            continue
        N = p * q
        if N.bit_length() != bits:
            continue
        if gmpy2.gcd(N, (p - 1) * (q - 1)) != 1:
            continue
        break
    lam = gmpy2.lcm(p - 1, q - 1)
    d = lam * gmpy2.invert(lam, N)
    N2 = N * N
    while True:
        x = mpz(rng.below(int(N)))
        if x and gmpy2.gcd(x, N) == 1:
            break
    h = (-x * x) % N
    h_s = gmpy2.powmod(h, N, N2)
    width = int(d).bit_length() + STAT_PAD
    shares = [int(rng.randbits(width)) for _ in range(m - 1)]
    shares.append(int(d) - sum(shares))
    return PaillierKeyMaterial(PaillierPublicKey(N, h_s), tuple(shares))


def _check_plain(pk, x):
    if not 0 <= x < pk.N:
        raise PlaintextRangeError("Paillier plaintext must lie in [0, N)")


def pai_enc_with(pk, x, alpha):
    _check_plain(pk, x)
    return int((1 + mpz(x) * pk.N) * pk.hs_pow(alpha) % pk.N2)


def pai_random(pk, rng):
    return rng.randbits(pk.alpha_bits)


def pai_enc(pk, x, rng, return_randomness=False):
    alpha = pai_random(pk, rng)
    ct = pai_enc_with(pk, x, alpha)
    return (ct, alpha) if return_randomness else ct


def pai_renc(pk, ct, rng):
    return int(mpz(ct) * pk.hs_pow(pai_random(pk, rng)) % pk.N2)


def pai_add(pk, ct1, ct2):
    return int(mpz(ct1) * mpz(ct2) % pk.N2)


def pai_partial_decrypt(pk, ct, share):
    return int(gmpy2.powmod(mpz(ct), mpz(share), pk.N2))


def pai_combine(pk, partials, m):
    if sorted(partials) != list(range(m)):
        raise ProtocolError(f"threshold decryption needs shares from all {m} parties, got {sorted(partials)}")
    acc = mpz(1)
    for k in range(m):
        acc = acc * partials[k] % pk.N2
    if acc % pk.N != 1:
        raise ProtocolError("decryption shares do not combine to a valid plaintext")
    return int((acc - 1) // pk.N)


def pai_tdec(pk, ct, shares):
    return pai_combine(pk, {k: pai_partial_decrypt(pk, ct, s) for k, s in enumerate(shares)}, len(shares))


def check_no_wraparound(pk, value, bound):
    """Runtime guard: a decrypted homomorphic sum must stay below ``bound`` < N."""
    if bound >= pk.N:
        raise WraparoundError(f"bound {bound} is not below N")
    if value >= bound:
        raise WraparoundError(f"decrypted sum {value} reached the bound {bound}")
    return value


def ciphertext_to_bytes(pk, ct):
    return int(ct).to_bytes(pk.ciphertext_bytes(), "big")


def ciphertext_from_bytes(pk, data):
    return int.from_bytes(data, "big")


class PaiScheme:
    """Paillier under one public key, in the shape the shuffle expects."""

    name = "paillier"

    def __init__(self, pk):
        self.pk = pk

    def renc(self, ct, rng):
        return pai_renc(self.pk, ct, rng)

    def encode(self, ct):
        return ciphertext_to_bytes(self.pk, ct)
