"""Single-client ORE built from a keyed PRF over bit prefixes.

Each bit becomes a trit ``u_i = F(k, i || prefix(m, i)) + x_i mod 3``. Two
ciphertexts under one key agree up to the most significant differing bit,
where the larger plaintext's trit is one more (mod 3) than the smaller's.

Comparing ciphertexts from different keys is not detectable and gives
meaningless results.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass

from . import wire
from .basic import CmpOutcome
from .encoding import Plaintext, pack_bits
from .pairing import DeserializationError

KEY_BYTES = 32


@dataclass(frozen=True)
class OreSecretKey:
    prf_key: bytes

    def __post_init__(self):
        if len(self.prf_key) < 16:
            raise ValueError("PRF key must be at least 16 bytes")

    def to_bytes(self) -> bytes:
        return wire.header(wire.TAG_ORE_SK) + wire.blob(self.prf_key)

    @classmethod
    def from_bytes(cls, data: bytes) -> "OreSecretKey":
        r = wire.Reader(data, wire.TAG_ORE_SK)
        key = r.blob()
        r.finish()
        if len(key) < 16:
            raise DeserializationError("PRF key too short")
        return cls(key)


@dataclass(frozen=True)
class OreCiphertext:
    n: int
    u: tuple[int, ...]

    def to_bytes(self) -> bytes:
        packed = bytearray((self.n + 3) // 4)
        for i, t in enumerate(self.u):
            packed[i // 4] |= t << (2 * (3 - i % 4))
        return wire.header(wire.TAG_ORE_CT) + wire.u16(self.n) + bytes(packed)

    @classmethod
    def from_bytes(cls, data: bytes) -> "OreCiphertext":
        r = wire.Reader(data, wire.TAG_ORE_CT)
        n = r.u16()
        if n < 1:
            raise DeserializationError("zero bit-length")
        packed = r.take((n + 3) // 4)
        r.finish()
        u = []
        for i in range(len(packed) * 4):
            t = (packed[i // 4] >> (2 * (3 - i % 4))) & 3
            if i < n and t == 3:
                raise DeserializationError("invalid trit")
            if i >= n and t:
                raise DeserializationError("nonzero padding")
            if i < n:
                u.append(t)
        return cls(n, tuple(u))


def ore_setup(*, rng=None) -> OreSecretKey:
    if rng is None:
        return OreSecretKey(secrets.token_bytes(KEY_BYTES))
    return OreSecretKey(rng.randbytes(KEY_BYTES))


def prf_mod3(key: bytes, data: bytes) -> int:
    """HMAC-SHA256 reduced to Z_3 by rejection sampling on bytes."""
    counter = 0
    while True:
        digest = hmac.new(key, data + counter.to_bytes(4, "big"), hashlib.sha256).digest()
        for byte in digest:
            if byte < 255:
                return byte % 3
        counter += 1


def _prf_input(i: int, m: Plaintext) -> bytes:
    head = m.value >> (m.n - i + 1)
    bits = format(head, f"0{i - 1}b") if i > 1 else ""
    return b"ORE" + i.to_bytes(2, "big") + m.n.to_bytes(2, "big") + pack_bits(bits)


def ore_encrypt(m: Plaintext, sk: OreSecretKey) -> OreCiphertext:
    u = tuple(
        (prf_mod3(sk.prf_key, _prf_input(i, m)) + m.bit(i)) % 3 for i in range(1, m.n + 1)
    )
    return OreCiphertext(m.n, u)


def ore_compare(ct: OreCiphertext, ct2: OreCiphertext) -> CmpOutcome:
    if ct.n != ct2.n:
        raise ValueError("bit-length mismatch")
    for i, (a, b) in enumerate(zip(ct.u, ct2.u)):
        if a != b:
            return CmpOutcome(int(b == (a + 1) % 3), i + 1)
    return CmpOutcome(0, ct.n + 1)
