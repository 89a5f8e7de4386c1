"""Binary container shared by every serialized object.

Layout: ``b"MCOR"`` | version (1 byte) | type tag (1 byte) | body. Ciphertext
bodies start with the client index (4 bytes BE) and the bit-length (2 bytes
BE), followed by compressed group elements in index order.
"""

from __future__ import annotations

import struct

from .pairing import G1_BYTES, G2_BYTES, ORDER, DeserializationError, g1_from_bytes, g2_from_bytes

MAGIC = b"MCOR"
VERSION = 1

# ciphertexts
TAG_BASIC_CT = 0x01
TAG_EORE_CT = 0x02
TAG_ORE_CT = 0x03
TAG_ENHANCED_CT = 0x04
# comparison keys and registrations
TAG_BASIC_CK = 0x11
TAG_EORE_CK = 0x12
TAG_REGISTRATION = 0x13
# public parameters
TAG_BASIC_PP = 0x21
TAG_EORE_PP = 0x22
# master keys
TAG_BASIC_MK = 0x31
TAG_EORE_MK = 0x32
# client secret keys
TAG_CLIENT_SK = 0x41
TAG_ORE_SK = 0x43
TAG_ENHANCED_SK = 0x44

HEADER_LEN = len(MAGIC) + 2


def header(tag: int) -> bytes:
    return MAGIC + bytes([VERSION, tag])


def peek_tag(data: bytes) -> int:
    if len(data) < HEADER_LEN or data[:4] != MAGIC:
        raise DeserializationError("bad magic")
    if data[4] != VERSION:
        raise DeserializationError(f"unsupported version {data[4]}")
    return data[5]


class Reader:
    """Sequential reader over one container; every read is bounds-checked."""

    def __init__(self, data: bytes, tag: int):
        got = peek_tag(data)
        if got != tag:
            raise DeserializationError(f"type tag 0x{got:02x}, expected 0x{tag:02x}")
        self.data = bytes(data)
        self.pos = HEADER_LEN

    def take(self, k: int) -> bytes:
        if k < 0 or self.pos + k > len(self.data):
            raise DeserializationError("truncated input")
        out = self.data[self.pos : self.pos + k]
        self.pos += k
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def blob(self) -> bytes:
        return self.take(self.u32())

    def scalar(self) -> int:
        k = int.from_bytes(self.take(32), "big")
        if not 0 < k < ORDER:
            raise DeserializationError("scalar out of range")
        return k

    def g1(self):
        return g1_from_bytes(self.take(G1_BYTES))

    def g2(self):
        return g2_from_bytes(self.take(G2_BYTES))

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise DeserializationError("trailing bytes")


def u16(v: int) -> bytes:
    return struct.pack(">H", v)


def u32(v: int) -> bytes:
    return struct.pack(">I", v)


def blob(b: bytes) -> bytes:
    return u32(len(b)) + b


def scalar(k: int) -> bytes:
    return k.to_bytes(32, "big")
