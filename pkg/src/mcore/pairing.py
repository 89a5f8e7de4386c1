"""Type-3 pairing backend over BLS12-381.

Group arithmetic and the pairing come from mcl (``pymcl``); hashing to the
source groups uses blst's RFC 9380 ``XMD:SHA-256_SSWU_RO_`` suites (``pyblst``)
with explicit domain-separation tags. Points are exchanged in the standard
ZCash compressed encoding (48 bytes in G1, 96 bytes in G2); target-group
elements use mcl's 576-byte encoding (twelve little-endian base-field
coefficients).

Scalars are plain Python ints reduced modulo :data:`ORDER`.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, fields
from functools import lru_cache

import gmpy2
import pyblst
import pymcl

__all__ = [
    "CURVE",
    "ORDER",
    "H1_TAG",
    "H2_TAG",
    "G1Element",
    "G2Element",
    "GtElement",
    "PairingStats",
    "DeserializationError",
    "random_scalar",
    "g1_generator",
    "g2_generator",
    "g1_identity",
    "g2_identity",
    "gt_identity",
    "g1_mul",
    "g2_mul",
    "gt_pow",
    "hash_to_g1",
    "hash_to_g2",
    "pair",
    "g1_to_bytes",
    "g1_from_bytes",
    "g2_to_bytes",
    "g2_from_bytes",
    "gt_to_bytes",
    "gt_from_bytes",
    "G1_BYTES",
    "G2_BYTES",
    "GT_BYTES",
]

CURVE = "BLS12-381"
ORDER: int = pymcl.r
FIELD = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB

H1_TAG = b"MCORE-H1-v1"
H2_TAG = b"MCORE-H2-v1"

G1_BYTES = 48
G2_BYTES = 96
GT_BYTES = 576

G1Element = pymcl.G1
G2Element = pymcl.G2
GtElement = pymcl.GT

_P = gmpy2.mpz(FIELD)
_HALF = (FIELD - 1) // 2
_SQRT_EXP = gmpy2.mpz((FIELD + 1) // 4)
_INV2 = pow(2, -1, FIELD)

_FLAG_COMPRESSED = 0x80
_FLAG_INFINITY = 0x40
_FLAG_SIGN = 0x20


class DeserializationError(ValueError):
    """Raised when bytes are not the canonical encoding of a group element."""


@dataclass
class PairingStats:
    """Operation counters for one instrumented scope."""

    pairings: int = 0
    g1_exps: int = 0
    g2_exps: int = 0
    hashes_to_curve: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def merge(self, other: "PairingStats") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


def _fr(k: int) -> pymcl.Fr:
    return pymcl.Fr(str(k % ORDER))


def random_scalar(rng=None) -> int:
    """Uniform scalar in [1, ORDER - 1]. ``rng`` needs a ``randrange`` method."""
    if rng is None:
        return secrets.randbelow(ORDER - 1) + 1
    return rng.randrange(1, ORDER)


def g1_generator() -> G1Element:
    return pymcl.g1


def g2_generator() -> G2Element:
    return pymcl.g2


def g1_identity() -> G1Element:
    return pymcl.G1()


def g2_identity() -> G2Element:
    return pymcl.G2()


def gt_identity() -> GtElement:
    return pymcl.pairing(pymcl.G1(), pymcl.g2)


def g1_mul(point: G1Element, k: int, stats: PairingStats | None = None) -> G1Element:
    if stats is not None:
        stats.g1_exps += 1
    return point * _fr(k)


def g2_mul(point: G2Element, k: int, stats: PairingStats | None = None) -> G2Element:
    if stats is not None:
        stats.g2_exps += 1
    return point * _fr(k)


def gt_pow(x: GtElement, k: int) -> GtElement:
    return x ** _fr(k)


def pair(a: G1Element, b: G2Element, stats: PairingStats | None = None) -> GtElement:
    """The bilinear map e(a, b)."""
    if stats is not None:
        stats.pairings += 1
    return pymcl.pairing(a, b)


# --- hashing ---------------------------------------------------------------


def _check_tag(tag: bytes) -> None:
    if not tag:
        raise ValueError("domain tag must be nonempty")
    if len(tag) > 255:
        raise ValueError("domain tag longer than 255 bytes")


@lru_cache(maxsize=1 << 16)
def _hash_g1_cached(tag: bytes, msg: bytes) -> G1Element:
    zc = pyblst.BlstP1Element().hash_to_group(msg, tag).compress()
    return g1_from_bytes(zc)


@lru_cache(maxsize=1 << 12)
def _hash_g2_cached(tag: bytes, msg: bytes) -> G2Element:
    zc = pyblst.BlstP2Element().hash_to_group(msg, tag).compress()
    return g2_from_bytes(zc)


def hash_to_g1(tag: bytes, msg: bytes, stats: PairingStats | None = None) -> G1Element:
    """BLS12381G1_XMD:SHA-256_SSWU_RO_ with domain tag ``tag``."""
    _check_tag(tag)
    if stats is not None:
        stats.hashes_to_curve += 1
    return _hash_g1_cached(bytes(tag), bytes(msg))


def hash_to_g2(tag: bytes, msg: bytes, stats: PairingStats | None = None) -> G2Element:
    """BLS12381G2_XMD:SHA-256_SSWU_RO_ with domain tag ``tag``."""
    _check_tag(tag)
    if stats is not None:
        stats.hashes_to_curve += 1
    return _hash_g2_cached(bytes(tag), bytes(msg))


# --- base-field helpers ------------------------------------------------------


def _sqrt_fp(a):
    """Square root in Fp, or None. Valid because p = 3 mod 4."""
    a = gmpy2.mpz(a) % _P
    y = gmpy2.powmod(a, _SQRT_EXP, _P)
    if y * y % _P != a:
        return None
    return y


def _fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    return ((a0 * b0 - a1 * b1) % _P, (a0 * b1 + a1 * b0) % _P)


def _sqrt_fp2(a):
    """Square root in Fp2 = Fp[u]/(u^2 + 1), or None."""
    a0, a1 = gmpy2.mpz(a[0]) % _P, gmpy2.mpz(a[1]) % _P
    if a1 == 0:
        r = _sqrt_fp(a0)
        if r is not None:
            return (r, gmpy2.mpz(0))
        r = _sqrt_fp(-a0)
        return None if r is None else (gmpy2.mpz(0), r)
    norm = _sqrt_fp(a0 * a0 + a1 * a1)
    if norm is None:
        return None
    for cand in ((a0 + norm) * _INV2, (a0 - norm) * _INV2):
        x0 = _sqrt_fp(cand)
        if x0 is not None and x0 != 0:
            x1 = a1 * gmpy2.invert(2 * x0, _P) % _P
            if _fp2_mul((x0, x1), (x0, x1)) == (a0, a1):
                return (x0, x1)
    return None


def _g1_rhs(x):
    return (x * x * x + 4) % _P


def _g2_rhs(x):
    x3 = _fp2_mul(_fp2_mul(x, x), x)
    return ((x3[0] + 4) % _P, (x3[1] + 4) % _P)


# --- G1 encoding ---------------------------------------------------------------


def g1_to_bytes(point: G1Element) -> bytes:
    """48-byte ZCash compressed encoding."""
    raw = point.serialize()
    if not any(raw):
        return bytes([_FLAG_COMPRESSED | _FLAG_INFINITY]) + bytes(G1_BYTES - 1)
    odd = raw[-1] >> 7
    x = int.from_bytes(raw[:-1] + bytes([raw[-1] & 0x7F]), "little")
    y = _sqrt_fp(_g1_rhs(x))
    if (int(y) & 1) != odd:
        y = _P - y
    out = bytearray(x.to_bytes(G1_BYTES, "big"))
    out[0] |= _FLAG_COMPRESSED | (_FLAG_SIGN if y > _HALF else 0)
    return bytes(out)


def _split_flags(data: bytes, size: int, what: str) -> tuple[bool, bool, bytes]:
    if len(data) != size:
        raise DeserializationError(f"{what}: expected {size} bytes, got {len(data)}")
    flags = data[0]
    if not flags & _FLAG_COMPRESSED:
        raise DeserializationError(f"{what}: compression flag not set")
    body = bytes([flags & 0x1F]) + bytes(data[1:])
    infinity = bool(flags & _FLAG_INFINITY)
    sign = bool(flags & _FLAG_SIGN)
    if infinity and (sign or any(body)):
        raise DeserializationError(f"{what}: non-canonical point at infinity")
    return infinity, sign, body


def g1_from_bytes(data: bytes) -> G1Element:
    """Inverse of :func:`g1_to_bytes`; rejects off-curve and off-subgroup points."""
    infinity, sign, body = _split_flags(data, G1_BYTES, "G1")
    if infinity:
        return pymcl.G1()
    x = int.from_bytes(body, "big")
    if x >= FIELD:
        raise DeserializationError("G1: coordinate not reduced")
    y = _sqrt_fp(_g1_rhs(x))
    if y is None:
        raise DeserializationError("G1: point not on curve")
    if (y > _HALF) != sign:
        y = _P - y
    raw = bytearray(x.to_bytes(G1_BYTES, "little"))
    if int(y) & 1:
        raw[-1] |= 0x80
    try:
        return pymcl.G1.deserialize(bytes(raw))
    except ValueError as exc:
        raise DeserializationError("G1: point not in the prime-order subgroup") from exc


# --- G2 encoding ---------------------------------------------------------------


def _fp2_sign(y) -> bool:
    if y[1] != 0:
        return y[1] > _HALF
    return y[0] > _HALF


def g2_to_bytes(point: G2Element) -> bytes:
    """96-byte ZCash compressed encoding (x.c1 then x.c0, big-endian)."""
    raw = point.serialize()
    if not any(raw):
        return bytes([_FLAG_COMPRESSED | _FLAG_INFINITY]) + bytes(G2_BYTES - 1)
    odd = raw[-1] >> 7
    x0 = int.from_bytes(raw[:48], "little")
    x1 = int.from_bytes(raw[48:95] + bytes([raw[95] & 0x7F]), "little")
    y = _sqrt_fp2(_g2_rhs((gmpy2.mpz(x0), gmpy2.mpz(x1))))
    if (int(y[0]) & 1) != odd:
        y = ((-y[0]) % _P, (-y[1]) % _P)
    out = bytearray(x1.to_bytes(48, "big") + x0.to_bytes(48, "big"))
    out[0] |= _FLAG_COMPRESSED | (_FLAG_SIGN if _fp2_sign(y) else 0)
    return bytes(out)


def g2_from_bytes(data: bytes) -> G2Element:
    infinity, sign, body = _split_flags(data, G2_BYTES, "G2")
    if infinity:
        return pymcl.G2()
    x1 = int.from_bytes(body[:48], "big")
    x0 = int.from_bytes(body[48:], "big")
    if x0 >= FIELD or x1 >= FIELD:
        raise DeserializationError("G2: coordinate not reduced")
    y = _sqrt_fp2(_g2_rhs((gmpy2.mpz(x0), gmpy2.mpz(x1))))
    if y is None:
        raise DeserializationError("G2: point not on curve")
    if _fp2_sign(y) != sign:
        y = ((-y[0]) % _P, (-y[1]) % _P)
    raw = bytearray(x0.to_bytes(48, "little") + x1.to_bytes(48, "little"))
    if int(y[0]) & 1:
        raw[-1] |= 0x80
    try:
        return pymcl.G2.deserialize(bytes(raw))
    except ValueError as exc:
        raise DeserializationError("G2: point not in the prime-order subgroup") from exc


# --- GT encoding ---------------------------------------------------------------


def gt_to_bytes(x: GtElement) -> bytes:
    return x.serialize()


def gt_from_bytes(data: bytes) -> GtElement:
    if len(data) != GT_BYTES:
        raise DeserializationError(f"GT: expected {GT_BYTES} bytes, got {len(data)}")
    try:
        x = pymcl.GT.deserialize(bytes(data))
    except ValueError as exc:
        raise DeserializationError("GT: malformed field element") from exc
    if x.isZero() or not (x ** _fr(ORDER - 1) * x).isOne():
        raise DeserializationError("GT: element not in the order-r subgroup")
    if x.serialize() != bytes(data):
        raise DeserializationError("GT: non-canonical encoding")
    return x
