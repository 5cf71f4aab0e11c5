"""Random-oracle style hashing: challenges in Z_q and hash-to-group."""

import hashlib

from . import G1, Q, P, g2_from_bytes_cleared


def _h(*parts):
    h = hashlib.sha256()
    for part in parts:
        h.update(len(part).to_bytes(4, "big"))
        h.update(part)
    return h.digest()


def hash_to_challenge(domain_tag, transcript):
    """SHA-256 over the tagged transcript, read big-endian, reduced mod q."""
    if isinstance(domain_tag, str):
        domain_tag = domain_tag.encode()
    return int.from_bytes(_h(b"tracemix/challenge", domain_tag, bytes(transcript)), "big") % Q


def hash_to_g1(seed, label):
    """Try-and-increment: hash to an x coordinate until it lands on the curve."""
    ctr = 0
    while True:
        digest = _h(b"tracemix/h2g1", seed, label, ctr.to_bytes(4, "big"))
        x = int.from_bytes(digest, "big") % P
        sign = _h(b"tracemix/h2g1/sign", digest)[0] & 1
        enc = bytearray(x.to_bytes(32, "big"))
        if sign:
            enc[0] |= 0x40
        try:
            pt = G1.from_bytes(bytes(enc))
        except ValueError:
            ctr += 1
            continue
        if not pt.is_identity():
            return pt
        ctr += 1


def hash_to_g2(seed, label):
    """Hash to a twist point, then clear the cofactor into the order-q subgroup."""
    ctr = 0
    while True:
        d1 = _h(b"tracemix/h2g2/x1", seed, label, ctr.to_bytes(4, "big"))
        d0 = _h(b"tracemix/h2g2/x0", seed, label, ctr.to_bytes(4, "big"))
        x1 = int.from_bytes(d1, "big") % P
        x0 = int.from_bytes(d0, "big") % P
        enc = bytearray(x1.to_bytes(32, "big") + x0.to_bytes(32, "big"))
        if d0[-1] & 1:
            enc[0] |= 0x40
        try:
            pt = g2_from_bytes_cleared(bytes(enc))
        except ValueError:
            ctr += 1
            continue
        if not pt.is_identity():
            return pt
        ctr += 1
