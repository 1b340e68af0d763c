"""Little-endian binary helpers shared by the model persistence formats."""

import struct

import numpy as np

from .errors import BadMagic, SizeMismatch


class Reader:
    """Sequential reader over a bytes buffer; all fields little-endian."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise SizeMismatch(self.pos + n, len(self.data))
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def expect_magic(self, magic):
        got = self.take(len(magic))
        if got != magic:
            raise BadMagic(f"expected magic {magic!r}, got {got!r}")

    def u8(self):
        return self.take(1)[0]

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self.take(8))[0]

    def f64(self):
        return struct.unpack("<d", self.take(8))[0]

    def f64s(self, count):
        raw = self.take(8 * count)
        return np.frombuffer(raw, dtype="<f8").copy()

    def u32s(self, count):
        raw = self.take(4 * count)
        return np.frombuffer(raw, dtype="<u4").copy()

    def done(self):
        if self.pos != len(self.data):
            raise SizeMismatch(self.pos, len(self.data))


class Writer:
    """Accumulates little-endian fields into a bytes blob."""

    def __init__(self):
        self.parts = []

    def magic(self, magic):
        self.parts.append(magic)

    def u8(self, v):
        self.parts.append(struct.pack("<B", v))

    def u32(self, v):
        self.parts.append(struct.pack("<I", v))

    def u64(self, v):
        self.parts.append(struct.pack("<Q", v))

    def f64(self, v):
        self.parts.append(struct.pack("<d", float(v)))

    def f64s(self, arr):
        self.parts.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())

    def u32s(self, arr):
        self.parts.append(np.ascontiguousarray(arr, dtype="<u4").tobytes())

    def getvalue(self):
        return b"".join(self.parts)
