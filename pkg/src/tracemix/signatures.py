"""Boneh-Boyen and BBS+ signatures, plus BBS+ quasi-signatures on commitments.

The blinded-signature arithmetic of the query protocols lives with those
protocols; this module only issues signatures and checks their equations.
"""

from dataclasses import dataclass

from .algebra import G1, G2, Q, multi_pairing, g1_multi_exp
from .algebra.encoding import Writer


class DegenerateMessageError(ValueError):
    """The message equals minus the secret key, so 1/(x+m) does not exist."""


@dataclass(frozen=True)
class BBKeyPair:
    x: int
    y: G2


@dataclass(frozen=True)
class BBSPlusKeyPair:
    x: int
    y: G2


@dataclass(frozen=True)
class BBSPlusSignature:
    S: G1
    c: int
    r: int

    def to_bytes(self):
        return Writer().element(self.S).scalar(self.c).scalar(self.r).getvalue()


@dataclass(frozen=True)
class QuasiBBSPlusSignature:
    S: G1
    c: int
    r_hat: int

    def to_bytes(self):
        return Writer().element(self.S).scalar(self.c).scalar(self.r_hat).getvalue()


def bb_fake(params):
    """Stand-in published for indices outside the signed set."""
    return params.g1


def bbs_fake_S():
    """Stand-in S component (f1^0) for unsigned commitments."""
    return G1.identity()


def _in_range(k):
    return isinstance(k, int) and 0 <= k < Q


# ------------------------------------------------------------ Boneh-Boyen

def bb_keygen(params, rng):
    x = rng.scalar()
    return BBKeyPair(x, params.g2 ** x)


def bb_sign(params, key, v):
    e = (key.x + v) % Q
    if e == 0:
        raise DegenerateMessageError("message is -x mod q")
    return params.g1 ** pow(e, -1, Q)


def bb_verify(params, y, v, sigma):
    """e(sigma, y g2^v) == e(g1, g2)."""
    if not isinstance(sigma, G1) or not isinstance(y, G2):
        return False
    lhs_g2 = y * params.g2 ** v
    return multi_pairing([(sigma, lhs_g2), (params.g1.inverse(), params.g2)]).is_identity()


# ------------------------------------------------------------ BBS+

def bbsplus_keygen(params, rng):
    x = rng.nonzero_scalar()
    return BBSPlusKeyPair(x, params.f2 ** x)


def _fresh_c(key, rng):
    while True:
        c = rng.scalar()
        if (c + key.x) % Q:
            return c


def bbsplus_sign(params, key, v, rng):
    c = _fresh_c(key, rng)
    r = rng.scalar()
    base = g1_multi_exp([params.f1, params.g1, params.h1], [1, v, r])
    return BBSPlusSignature(base ** pow(c + key.x, -1, Q), c, r)


def bbsplus_verify(params, y, v, sig):
    """e(S, y f2^c) == e(f1 g1^v h1^r, f2)."""
    if not isinstance(sig.S, G1) or not (_in_range(sig.c) and _in_range(sig.r)):
        return False
    rhs = g1_multi_exp([params.f1, params.g1, params.h1], [1, v, sig.r])
    return multi_pairing([(sig.S, y * params.f2 ** sig.c), (rhs.inverse(), params.f2)]).is_identity()


def quasi_sign(params, key, gamma, rng):
    """(S, c, r_hat) with S = (f1 h1^r_hat gamma)^(1/(c+x)).

    The caller must already have checked a proof of knowledge of gamma's opening.
    """
    c = _fresh_c(key, rng)
    r_hat = rng.scalar()
    return quasi_sign_with(params, key, gamma, c, r_hat)


def quasi_sign_with(params, key, gamma, c, r_hat):
    if not (c + key.x) % Q:
        raise DegenerateMessageError("c is -x mod q")
    base = params.f1 * params.h1 ** r_hat * gamma
    return QuasiBBSPlusSignature(base ** pow(c + key.x, -1, Q), c, r_hat)


def verq(params, sig, gamma, y):
    """e(S, y f2^c) == e(f1 h1^r_hat gamma, f2)."""
    if not isinstance(sig.S, G1) or not (_in_range(sig.c) and _in_range(sig.r_hat)):
        return False
    rhs = params.f1 * params.h1 ** sig.r_hat * gamma
    return multi_pairing([(sig.S, y * params.f2 ** sig.c), (rhs.inverse(), params.f2)]).is_identity()


def derive_from_quasi(sig, r):
    """Turn a quasi-signature on commit(v, r) into a BBS+ signature on v."""
    return BBSPlusSignature(sig.S, sig.c, (sig.r_hat + r) % Q)
