"""Basic multi-client ORE.

A ciphertext of client ``j`` on ``m`` holds ``H(E_b(i, m))^{s_j}`` for every
bit position ``i`` and ``b`` in {0, 1}. Ciphertexts of one client compare
publicly by element equality; ciphertexts of two clients compare through a
comparison key ``(g^{r s_j}, g^{r s_k})`` in the second group and pairings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import wire
from .encoding import Plaintext, encode_bytes
from .pairing import (
    CURVE,
    H1_TAG,
    H2_TAG,
    G1Element,
    G2Element,
    PairingStats,
    DeserializationError,
    g1_generator,
    g1_to_bytes,
    g2_generator,
    g2_mul,
    g2_to_bytes,
    hash_to_g1,
    hash_to_g2,
    pair,
    random_scalar,
)
from .pairing import _fr


class IntegrityError(Exception):
    """Ciphertexts are not consistent with one another under the given key."""


class OrientationError(ValueError):
    """Ciphertext client indices do not match the comparison key."""


class CmpOutcome(NamedTuple):
    less: int
    msdb: int | None  # None only where a method cannot pin it down


@dataclass(frozen=True)
class PublicParams:
    n: int
    N: int
    g: G1Element
    g_hat: G2Element
    curve: str = CURVE

    def check_client(self, j: int) -> None:
        if not 1 <= j <= self.N:
            raise ValueError(f"client index {j} outside [1, {self.N}]")

    def plaintext(self, m) -> Plaintext:
        if isinstance(m, Plaintext):
            if m.n != self.n:
                raise ValueError(f"plaintext has {m.n} bits, parameters use {self.n}")
            return m
        return Plaintext(int(m), self.n)

    def _body(self) -> bytes:
        cid = self.curve.encode()
        return (
            wire.u16(len(cid)) + cid + wire.u16(self.n) + wire.u32(self.N)
            + g1_to_bytes(self.g) + g2_to_bytes(self.g_hat)
        )

    def to_bytes(self) -> bytes:
        return wire.header(wire.TAG_BASIC_PP) + self._body()

    @staticmethod
    def _read_body(r: wire.Reader) -> dict:
        curve = r.take(r.u16()).decode(errors="replace")
        if curve != CURVE:
            raise DeserializationError(f"unsupported curve {curve!r}")
        n, N = r.u16(), r.u32()
        if n < 1 or N < 1:
            raise DeserializationError("invalid sizes")
        return dict(n=n, N=N, g=r.g1(), g_hat=r.g2(), curve=curve)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PublicParams":
        r = wire.Reader(data, wire.TAG_BASIC_PP)
        pp = cls(**cls._read_body(r))
        r.finish()
        return pp


@dataclass(frozen=True)
class MasterKey:
    s: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.s)

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_BASIC_MK) + wire.u32(self.N)
            + b"".join(wire.scalar(x) for x in self.s)
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "MasterKey":
        r = wire.Reader(data, wire.TAG_BASIC_MK)
        N = r.u32()
        if N < 1:
            raise DeserializationError("empty master key")
        mk = cls(tuple(r.scalar() for _ in range(N)))
        r.finish()
        return mk


@dataclass(frozen=True)
class ClientSecretKey:
    j: int
    s: int

    def to_bytes(self) -> bytes:
        return wire.header(wire.TAG_CLIENT_SK) + wire.u32(self.j) + wire.scalar(self.s)

    @classmethod
    def from_bytes(cls, data: bytes) -> "ClientSecretKey":
        r = wire.Reader(data, wire.TAG_CLIENT_SK)
        sk = cls(r.u32(), r.scalar())
        r.finish()
        return sk


@dataclass(frozen=True)
class BasicCiphertext:
    j: int
    n: int
    c0: tuple[G1Element, ...]
    c1: tuple[G1Element, ...]

    def element_count(self) -> int:
        return len(self.c0) + len(self.c1)

    def to_bytes(self) -> bytes:
        parts = [wire.header(wire.TAG_BASIC_CT), wire.u32(self.j), wire.u16(self.n)]
        for a, b in zip(self.c0, self.c1):
            parts.append(g1_to_bytes(a))
            parts.append(g1_to_bytes(b))
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "BasicCiphertext":
        r = wire.Reader(data, wire.TAG_BASIC_CT)
        j, n = r.u32(), r.u16()
        if n < 1:
            raise DeserializationError("zero bit-length")
        c0, c1 = [], []
        for _ in range(n):
            c0.append(r.g1())
            c1.append(r.g1())
        r.finish()
        return cls(j, n, tuple(c0), tuple(c1))


@dataclass(frozen=True)
class BasicComparisonKey:
    j: int
    k: int
    k0: G2Element
    k1: G2Element

    def swapped(self) -> "BasicComparisonKey":
        return BasicComparisonKey(self.k, self.j, self.k1, self.k0)

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_BASIC_CK) + wire.u32(self.j) + wire.u32(self.k)
            + g2_to_bytes(self.k0) + g2_to_bytes(self.k1)
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "BasicComparisonKey":
        r = wire.Reader(data, wire.TAG_BASIC_CK)
        ck = cls(r.u32(), r.u32(), r.g2(), r.g2())
        r.finish()
        return ck


@dataclass(frozen=True)
class Registration:
    """``g_hat^{s_j}`` sent by client j to a reduced-trust center."""

    j: int
    element: G2Element

    def to_bytes(self) -> bytes:
        return wire.header(wire.TAG_REGISTRATION) + wire.u32(self.j) + g2_to_bytes(self.element)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Registration":
        r = wire.Reader(data, wire.TAG_REGISTRATION)
        reg = cls(r.u32(), r.g2())
        r.finish()
        return reg


# --- algorithms ----------------------------------------------------------------


def setup(N: int, n: int = 32, *, rng=None) -> tuple[MasterKey, PublicParams]:
    if N < 1:
        raise ValueError("need at least one client")
    if not 1 <= n <= 0xFFFF:
        raise ValueError("bit-length must be in [1, 65535]")
    mk = MasterKey(tuple(random_scalar(rng) for _ in range(N)))
    return mk, PublicParams(n=n, N=N, g=g1_generator(), g_hat=g2_generator())


def gen_key(j: int, mk: MasterKey, pp: PublicParams) -> ClientSecretKey:
    pp.check_client(j)
    return ClientSecretKey(j, mk.s[j - 1])


def encrypt_elements(m: Plaintext, s: int, stats: PairingStats | None = None):
    """The 2n elements ``H(E_b(i, m))^s`` as two tuples (b = 0, b = 1)."""
    fs = _fr(s)
    c0, c1 = [], []
    for i in range(1, m.n + 1):
        c0.append(hash_to_g1(H1_TAG, encode_bytes(i, m, 0), stats) * fs)
        c1.append(hash_to_g1(H1_TAG, encode_bytes(i, m, 1), stats) * fs)
    if stats is not None:
        stats.g1_exps += 2 * m.n
    return tuple(c0), tuple(c1)


def encrypt(m, sk: ClientSecretKey, pp: PublicParams,
            stats: PairingStats | None = None) -> BasicCiphertext:
    """Deterministic encryption of ``m`` (int or Plaintext) under client key ``sk``."""
    pp.check_client(sk.j)
    m = pp.plaintext(m)
    c0, c1 = encrypt_elements(m, sk.s, stats)
    return BasicCiphertext(sk.j, m.n, c0, c1)


def compare(ct: BasicCiphertext, ct2: BasicCiphertext, pp: PublicParams | None = None) -> CmpOutcome:
    """Public comparison of two ciphertexts from the same client."""
    if ct.j != ct2.j:
        raise ValueError(
            f"ciphertexts belong to clients {ct.j} and {ct2.j}; use compare_mc with a comparison key"
        )
    if ct.n != ct2.n:
        raise ValueError("bit-length mismatch")
    for i in range(ct.n):
        if ct.c0[i] != ct2.c0[i]:
            if ct.c1[i] == ct2.c0[i]:
                return CmpOutcome(1, i + 1)
            if ct.c0[i] == ct2.c1[i]:
                return CmpOutcome(0, i + 1)
            raise IntegrityError(f"no direction relation at index {i + 1}")
    return CmpOutcome(0, ct.n + 1)


def gen_cmp_key(j: int, k: int, mk: MasterKey, pp: PublicParams, *, rng=None) -> BasicComparisonKey:
    pp.check_client(j)
    pp.check_client(k)
    if j == k:
        raise ValueError("comparison keys are only issued for two distinct clients")
    r = random_scalar(rng)
    return BasicComparisonKey(
        j, k, g2_mul(pp.g_hat, r * mk.s[j - 1]), g2_mul(pp.g_hat, r * mk.s[k - 1])
    )


def client_keygen(j: int, *, rng=None) -> ClientSecretKey:
    """A client-chosen secret key, for use with a reduced-trust center."""
    if j < 1:
        raise ValueError("client indices start at 1")
    return ClientSecretKey(j, random_scalar(rng))


def register(sk: ClientSecretKey, pp: PublicParams) -> Registration:
    return Registration(sk.j, g2_mul(pp.g_hat, sk.s))


def gen_cmp_key_from_registrations(reg_j: Registration, reg_k: Registration, *, rng=None) -> BasicComparisonKey:
    """Reduced-trust center: raise both registrations to one fresh exponent."""
    if reg_j.j == reg_k.j:
        raise ValueError("comparison keys are only issued for two distinct clients")
    for reg in (reg_j, reg_k):
        if reg.element.isZero():
            raise ValueError(f"registration of client {reg.j} is the identity")
    r = random_scalar(rng)
    return BasicComparisonKey(reg_j.j, reg_k.j, g2_mul(reg_j.element, r), g2_mul(reg_k.element, r))


def centerless_base(j: int, k: int) -> G2Element:
    lo, hi = min(j, k), max(j, k)
    return hash_to_g2(H2_TAG, b"cmpkey" + wire.u32(lo) + wire.u32(hi))


def gen_cmp_key_share_centerless(j: int, k: int, sk: ClientSecretKey) -> G2Element:
    """``H(j || k)^{s}`` for the canonical (min, max) ordering of the pair."""
    if j == k:
        raise ValueError("comparison keys are only issued for two distinct clients")
    if sk.j not in (j, k):
        raise ValueError(f"client {sk.j} is not part of the pair ({j}, {k})")
    return g2_mul(centerless_base(j, k), sk.s)


def assemble_centerless_key(j: int, k: int, share_j: G2Element, share_k: G2Element) -> BasicComparisonKey:
    if j == k:
        raise ValueError("comparison keys are only issued for two distinct clients")
    if share_j.isZero() or share_k.isZero():
        raise ValueError("identity share")
    return BasicComparisonKey(j, k, share_j, share_k)


def orient(ct_j: int, ct2_j: int, ck):
    """Return ``ck`` oriented so that ``ck.j`` owns the first ciphertext."""
    if (ct_j, ct2_j) == (ck.j, ck.k):
        return ck
    if (ct_j, ct2_j) == (ck.k, ck.j):
        return ck.swapped()
    raise OrientationError(
        f"ciphertexts of clients ({ct_j}, {ct2_j}) do not match key for ({ck.j}, {ck.k})"
    )


def direction(ct, ct2, i, p, p2, k0, k1, stats) -> CmpOutcome:
    """Decide order at the differing 0-based index ``i``.

    ``p`` and ``p2`` are the already-computed ``e(C_{i,0}, K_1)`` and
    ``e(C'_{i,0}, K_0)``. Costs two pairings.
    """
    lt = pair(ct.c1[i], k1, stats) == p2
    gt = pair(ct2.c1[i], k0, stats) == p
    if lt == gt:
        raise IntegrityError(f"no unique direction relation at index {i + 1}")
    return CmpOutcome(int(lt), i + 1)


def compare_mc(ct: BasicCiphertext, ct2: BasicCiphertext, ck: BasicComparisonKey,
               pp: PublicParams | None = None, stats: PairingStats | None = None) -> CmpOutcome:
    """Cross-client comparison by a sequential scan for the first differing bit.

    Uses ``2 * msdb + 2`` pairings when the plaintexts differ and ``2n`` when
    they are equal.
    """
    ck = orient(ct.j, ct2.j, ck)
    if ct.n != ct2.n:
        raise ValueError("bit-length mismatch")
    k0, k1 = ck.k0, ck.k1
    for i in range(ct.n):
        p = pair(ct.c0[i], k1, stats)
        p2 = pair(ct2.c0[i], k0, stats)
        if p != p2:
            return direction(ct, ct2, i, p, p2, k0, k1, stats)
    return CmpOutcome(0, ct.n + 1)
