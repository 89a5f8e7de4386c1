"""Plaintext bit handling.

Bits are indexed 1..n with ``x_1`` the most significant bit. An encoded
prefix ``E_b(i, m)`` is the first ``i - 1`` bits of ``m`` followed by the
two-bit code ``0 x_i`` (``b = 0``) or ``0 x_i + 1`` (``b = 1``).
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_BITS = 32

# Leading byte of every serialized encoding; must not depend on b, since
# E_1(i, m) and E_0(i, m') are meant to collide when m < m' differ at i.
ENCODING_TAG = 0x45


@dataclass(frozen=True)
class Plaintext:
    value: int
    n: int = DEFAULT_BITS

    def __post_init__(self):
        if self.n < 1 or self.n > 0xFFFF:
            raise ValueError(f"bit-length must be in [1, 65535], got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    def bit(self, i: int) -> int:
        """The i-th bit, 1-indexed from the most significant end."""
        _check_index(i, self.n)
        return (self.value >> (self.n - i)) & 1

    def bits(self) -> str:
        return format(self.value, f"0{self.n}b")


@dataclass(frozen=True)
class EncodedPrefix:
    index: int
    n: int
    bits: str

    def to_bytes(self) -> bytes:
        """Tag, index (2 bytes BE), n (2 bytes BE), bits packed MSB-first."""
        return (
            bytes([ENCODING_TAG])
            + self.index.to_bytes(2, "big")
            + self.n.to_bytes(2, "big")
            + pack_bits(self.bits)
        )


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"bit index {i} outside [1, {n}]")


def _as_plaintexts(m, m2) -> tuple[Plaintext, Plaintext]:
    if m.n != m2.n:
        raise ValueError(f"bit-length mismatch: {m.n} != {m2.n}")
    return m, m2


def pack_bits(bits: str) -> bytes:
    """Pack a '0'/'1' string MSB-first, zero-padded to a byte boundary."""
    if not bits:
        return b""
    pad = (-len(bits)) % 8
    return int(bits + "0" * pad, 2).to_bytes((len(bits) + pad) // 8, "big")


def cmp(m: Plaintext, m2: Plaintext) -> int:
    """1 if m < m2, else 0."""
    m, m2 = _as_plaintexts(m, m2)
    return int(m.value < m2.value)


def ind(m: Plaintext, m2: Plaintext) -> int:
    """Index of the most significant differing bit; n + 1 when equal."""
    m, m2 = _as_plaintexts(m, m2)
    diff = m.value ^ m2.value
    return m.n + 1 - diff.bit_length()


def prefix(m: Plaintext, i: int) -> str:
    """The leading i - 1 bits of m."""
    _check_index(i, m.n)
    return m.bits()[: i - 1]


def encode(i: int, m: Plaintext, b: int) -> EncodedPrefix:
    if b not in (0, 1):
        raise ValueError("b must be 0 or 1")
    code = m.bit(i) + b
    return EncodedPrefix(index=i, n=m.n, bits=prefix(m, i) + format(code, "02b"))


def encode_bytes(i: int, m: Plaintext, b: int) -> bytes:
    """Byte serialization of ``encode(i, m, b)`` without the intermediate string."""
    _check_index(i, m.n)
    if b not in (0, 1):
        raise ValueError("b must be 0 or 1")
    x = (m.value >> (m.n - i)) & 1
    # prefix bits followed by the two-bit code, as an (i + 1)-bit integer
    word = ((m.value >> (m.n - i + 1)) << 2) | (x + b)
    width = i + 1
    pad = (-width) % 8
    return (
        bytes([ENCODING_TAG])
        + i.to_bytes(2, "big")
        + m.n.to_bytes(2, "big")
        + (word << pad).to_bytes((width + pad) // 8, "big")
    )
