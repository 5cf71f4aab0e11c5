"""Public setup parameters shared by every party."""

from dataclasses import dataclass

from .algebra import G1, G2, GT, Q, pairing, BACKEND
from .algebra.encoding import Writer, Reader, DecodeError
from .algebra.hashing import hash_to_g1, hash_to_g2


@dataclass(frozen=True)
class SetupParams:
    seed: bytes
    m: int
    n: int
    f1: G1
    g1: G1
    h1: G1
    f2: G2
    g2: G2
    fT: GT
    q: int = Q

    @staticmethod
    def e(a, b):
        return pairing(a, b)

    def generators(self):
        return (self.f1, self.g1, self.h1, self.f2, self.g2, self.fT)

    def to_bytes(self):
        w = Writer().blob(self.seed).u32(self.m).u32(self.n)
        for gen in self.generators():
            w.element(gen)
        return w.getvalue()

    def generator_bytes(self):
        """Encoding of the generators alone, bound into every challenge hash."""
        w = Writer()
        for gen in self.generators():
            w.element(gen)
        return w.getvalue()

    @classmethod
    def from_reader(cls, r):
        seed = r.blob()
        m, n = r.u32(), r.u32()
        start = r.offset
        params = setup(seed, m, n)
        gens = tuple(r.element() for _ in range(6))
        if gens != params.generators():
            raise DecodeError("generators do not match the seed", start)
        return params


_CACHE = {}


def setup(seed, m, n):
    """Derive all generators from ``seed`` by hashing to the groups.

    Deterministic: the same seed always yields byte-identical parameters.
    """
    if isinstance(seed, str):
        seed = seed.encode()
    seed = bytes(seed)
    if m < 1 or n < 1:
        raise ValueError("setup needs m >= 1 and n >= 1")
    key = (seed, BACKEND)
    gens = _CACHE.get(key)
    if gens is None:
        f1 = hash_to_g1(seed, b"f1")
        g1 = hash_to_g1(seed, b"g1")
        h1 = hash_to_g1(seed, b"h1")
        f2 = hash_to_g2(seed, b"f2")
        g2 = hash_to_g2(seed, b"g2")
        fT = pairing(hash_to_g1(seed, b"fT"), hash_to_g2(seed, b"fT"))
        gens = (f1, g1, h1, f2, g2, fT)
        _CACHE[key] = gens
    return SetupParams(seed, m, n, *gens)


def read_params(data):
    return SetupParams.from_reader(Reader(data))
