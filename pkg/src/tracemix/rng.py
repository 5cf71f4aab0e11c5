"""Seeded deterministic randomness.

Every random choice in a session comes from one :class:`Rng` built from the
session seed; each role gets its own stream through :meth:`Rng.fork`, so
adding draws in one role never shifts another role's values.
"""

import hashlib
import os

from .algebra import Q


class Rng:
    _BLOCK = 136

    def __init__(self, seed=None):
        if seed is None:
            seed = os.urandom(32)
        if isinstance(seed, int):
            seed = seed.to_bytes(max(8, (seed.bit_length() + 7) // 8), "big")
        if isinstance(seed, str):
            seed = seed.encode()
        self._key = hashlib.sha256(b"tracemix/rng" + bytes(seed)).digest()
        self._counter = 0
        self._buf = b""

    def fork(self, label):
        if isinstance(label, str):
            label = label.encode()
        child = Rng.__new__(Rng)
        child._key = hashlib.sha256(b"tracemix/fork" + self._key + bytes(label)).digest()
        child._counter = 0
        child._buf = b""
        return child

    def randbytes(self, n):
        while len(self._buf) < n:
            block = hashlib.shake_256(self._key + self._counter.to_bytes(8, "big")).digest(self._BLOCK)
            self._counter += 1
            self._buf += block
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbits(self, k):
        if k <= 0:
            return 0
        v = int.from_bytes(self.randbytes((k + 7) // 8), "big")
        return v >> (8 * ((k + 7) // 8) - k)

    def below(self, n):
        """Uniform in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("upper bound must be positive")
        k = n.bit_length()
        while True:
            v = self.randbits(k)
            if v < n:
                return v

    def scalar(self):
        return self.below(Q)

    def nonzero_scalar(self):
        while True:
            v = self.below(Q)
            if v:
                return v

    def permutation(self, n):
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def subset(self, n, p=0.5):
        """Each of range(n) included independently with probability ~p."""
        scale = 1 << 32
        cut = int(p * scale)
        return frozenset(i for i in range(n) if self.randbits(32) < cut)
