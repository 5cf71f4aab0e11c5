"""Canonical wire encodings.

A group element travels as ``group_id || point_bytes`` and a scalar as 32
big-endian bytes.  :class:`Writer` and :class:`Reader` build the
length-prefixed records used by messages, hashes and transcripts; a
:class:`Reader` reports the absolute byte offset of anything it fails to parse.
"""

import struct

from . import G1, G2, GT, G1_BYTES, G2_BYTES, GT_BYTES, Q

GID_G1 = 1
GID_G2 = 2
GID_GT = 3

_SIZES = {GID_G1: G1_BYTES, GID_G2: G2_BYTES, GID_GT: GT_BYTES}
_CLASSES = {GID_G1: G1, GID_G2: G2, GID_GT: GT}
SCALAR_BYTES = 32


class DecodeError(ValueError):
    """Malformed input; ``offset`` is the absolute byte position of the fault."""

    def __init__(self, message, offset=None):
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


def group_id(x):
    if isinstance(x, G1):
        return GID_G1
    if isinstance(x, G2):
        return GID_G2
    if isinstance(x, GT):
        return GID_GT
    raise TypeError(f"not a group element: {type(x).__name__}")


def encode_element(x):
    return bytes([group_id(x)]) + x.to_bytes()


def decode_element(data, expect=None):
    if not data:
        raise DecodeError("empty element encoding")
    gid = data[0]
    if gid not in _SIZES:
        raise DecodeError(f"unknown group id {gid}")
    if expect is not None and gid != expect:
        raise DecodeError(f"expected group {expect}, found {gid}")
    if len(data) != 1 + _SIZES[gid]:
        raise DecodeError("wrong element length")
    try:
        return _CLASSES[gid].from_bytes(bytes(data[1:]))
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


def encode_scalar(k):
    if not 0 <= k < Q:
        raise ValueError("scalar out of range")
    return k.to_bytes(SCALAR_BYTES, "big")


def decode_scalar(data):
    if len(data) != SCALAR_BYTES:
        raise DecodeError("scalar must be 32 bytes")
    k = int.from_bytes(data, "big")
    if k >= Q:
        raise DecodeError("scalar not reduced")
    return k


def element_size(gid):
    return 1 + _SIZES[gid]


class Writer:
    def __init__(self):
        self._parts = []

    def raw(self, b):
        self._parts.append(bytes(b))
        return self

    def u8(self, v):
        return self.raw(struct.pack(">B", v))

    def u32(self, v):
        return self.raw(struct.pack(">I", v))

    def u64(self, v):
        return self.raw(struct.pack(">Q", v))

    def blob(self, b):
        b = bytes(b)
        return self.u32(len(b)).raw(b)

    def element(self, x):
        return self.raw(encode_element(x))

    def scalar(self, k):
        return self.raw(encode_scalar(k))

    def bigint(self, v):
        """Nonnegative integer of any size, length prefixed."""
        if v < 0:
            raise ValueError("negative integer")
        return self.blob(int(v).to_bytes((int(v).bit_length() + 7) // 8, "big"))

    def index_set(self, s):
        s = sorted(s)
        self.u32(len(s))
        for i in s:
            self.u32(i)
        return self

    def getvalue(self):
        return b"".join(self._parts)


class Reader:
    def __init__(self, data, base=0):
        self._data = memoryview(bytes(data))
        self._pos = 0
        self._base = base

    @property
    def offset(self):
        return self._base + self._pos

    def remaining(self):
        return len(self._data) - self._pos

    def take(self, n):
        if n < 0 or self._pos + n > len(self._data):
            raise DecodeError(f"truncated input, wanted {n} bytes", self.offset)
        out = bytes(self._data[self._pos:self._pos + n])
        self._pos += n
        return out

    def u8(self):
        return self.take(1)[0]

    def u32(self):
        return struct.unpack(">I", self.take(4))[0]

    def u64(self):
        return struct.unpack(">Q", self.take(8))[0]

    def blob(self):
        return self.take(self.u32())

    def element(self, expect=None):
        start = self.offset
        if self.remaining() < 1:
            raise DecodeError("truncated input, wanted a group element", start)
        gid = self._data[self._pos]
        if gid not in _SIZES:
            raise DecodeError(f"unknown group id {gid}", start)
        chunk = self.take(1 + _SIZES[gid])
        try:
            return decode_element(chunk, expect)
        except DecodeError as exc:
            raise DecodeError(str(exc).split(" at byte")[0], start) from None

    def scalar(self):
        start = self.offset
        try:
            return decode_scalar(self.take(SCALAR_BYTES))
        except DecodeError as exc:
            raise DecodeError(str(exc).split(" at byte")[0], start) from None

    def bigint(self):
        return int.from_bytes(self.blob(), "big")

    def index_set(self):
        count = self.u32()
        if count > self.remaining() // 4:
            raise DecodeError("index set count exceeds input", self.offset)
        return frozenset(self.u32() for _ in range(count))

    def expect_end(self):
        if self.remaining():
            raise DecodeError("trailing bytes", self.offset)
