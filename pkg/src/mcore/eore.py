"""Encrypted ORE: basic ciphertext elements masked ElGamal-style.

Every element ``F = H(E_b(i, m))^{s_j}`` is stored as ``(F h_j^t, g^t)`` with a
fresh ``t``. Nothing can be compared without a comparison key, whose extra
elements ``h_k^{r s_j}`` and ``h_j^{r s_k}`` cancel the masks inside the
pairing ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import wire
from .basic import (
    ClientSecretKey,
    CmpOutcome,
    IntegrityError,
    PublicParams,
    orient,
)
from .encoding import encode_bytes
from .pairing import (
    H1_TAG,
    G1Element,
    G2Element,
    PairingStats,
    DeserializationError,
    g1_generator,
    g1_to_bytes,
    g2_generator,
    g2_to_bytes,
    hash_to_g1,
    pair,
    random_scalar,
)
from .pairing import _fr


@dataclass(frozen=True)
class EorePublicParams(PublicParams):
    h: tuple[G1Element, ...] = ()

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_EORE_PP) + self._body()
            + b"".join(g1_to_bytes(x) for x in self.h)
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "EorePublicParams":
        r = wire.Reader(data, wire.TAG_EORE_PP)
        fields = cls._read_body(r)
        h = tuple(r.g1() for _ in range(fields["N"]))
        r.finish()
        if any(x.isZero() for x in h):
            raise DeserializationError("identity element in h")
        return cls(**fields, h=h)


@dataclass(frozen=True)
class EoreMasterKey:
    s: tuple[int, ...]
    h_hat: tuple[G2Element, ...]

    @property
    def N(self) -> int:
        return len(self.s)

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_EORE_MK) + wire.u32(self.N)
            + b"".join(wire.scalar(x) for x in self.s)
            + b"".join(g2_to_bytes(x) for x in self.h_hat)
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "EoreMasterKey":
        r = wire.Reader(data, wire.TAG_EORE_MK)
        N = r.u32()
        if N < 1:
            raise DeserializationError("empty master key")
        s = tuple(r.scalar() for _ in range(N))
        h_hat = tuple(r.g2() for _ in range(N))
        r.finish()
        return cls(s, h_hat)


@dataclass(frozen=True)
class EoreCiphertext:
    """``masked[2(i-1) + b] = (C_{i,b,0}, C_{i,b,1})`` for i in 1..n."""

    j: int
    n: int
    masked: tuple[tuple[G1Element, G1Element], ...]

    def part(self, i: int, b: int) -> tuple[G1Element, G1Element]:
        """Masked pair for 0-based bit index ``i``."""
        return self.masked[2 * i + b]

    def element_count(self) -> int:
        return 2 * len(self.masked)

    def to_bytes(self) -> bytes:
        parts = [wire.header(wire.TAG_EORE_CT), wire.u32(self.j), wire.u16(self.n)]
        for c0, c1 in self.masked:
            parts.append(g1_to_bytes(c0))
            parts.append(g1_to_bytes(c1))
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "EoreCiphertext":
        r = wire.Reader(data, wire.TAG_EORE_CT)
        j, n = r.u32(), r.u16()
        if n < 1:
            raise DeserializationError("zero bit-length")
        masked = tuple((r.g1(), r.g1()) for _ in range(2 * n))
        r.finish()
        return cls(j, n, masked)


@dataclass(frozen=True)
class EoreComparisonKey:
    j: int
    k: int
    k00: G2Element
    k01: G2Element
    k10: G2Element
    k11: G2Element

    def swapped(self) -> "EoreComparisonKey":
        return EoreComparisonKey(self.k, self.j, self.k10, self.k11, self.k00, self.k01)

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_EORE_CK) + wire.u32(self.j) + wire.u32(self.k)
            + b"".join(g2_to_bytes(x) for x in (self.k00, self.k01, self.k10, self.k11))
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "EoreComparisonKey":
        r = wire.Reader(data, wire.TAG_EORE_CK)
        ck = cls(r.u32(), r.u32(), r.g2(), r.g2(), r.g2(), r.g2())
        r.finish()
        return ck


def eore_setup(N: int, n: int = 32, *, rng=None) -> tuple[EoreMasterKey, EorePublicParams]:
    if N < 1:
        raise ValueError("need at least one client")
    if not 1 <= n <= 0xFFFF:
        raise ValueError("bit-length must be in [1, 65535]")
    g, g_hat = g1_generator(), g2_generator()
    s = tuple(random_scalar(rng) for _ in range(N))
    a = [random_scalar(rng) for _ in range(N)]
    h = tuple(g * _fr(x) for x in a)
    h_hat = tuple(g_hat * _fr(x) for x in a)
    return EoreMasterKey(s, h_hat), EorePublicParams(n=n, N=N, g=g, g_hat=g_hat, h=h)


def eore_gen_key(j: int, mk: EoreMasterKey, pp: EorePublicParams) -> ClientSecretKey:
    pp.check_client(j)
    return ClientSecretKey(j, mk.s[j - 1])


def eore_encrypt(m, sk: ClientSecretKey, pp: EorePublicParams, *, rng=None,
                 stats: PairingStats | None = None) -> EoreCiphertext:
    """Randomized encryption; every one of the 2n elements gets its own mask."""
    pp.check_client(sk.j)
    m = pp.plaintext(m)
    fs = _fr(sk.s)
    h_j = pp.h[sk.j - 1]
    masked = []
    for i in range(1, m.n + 1):
        for b in (0, 1):
            f = hash_to_g1(H1_TAG, encode_bytes(i, m, b), stats) * fs
            t = _fr(random_scalar(rng))
            masked.append((f + h_j * t, pp.g * t))
    if stats is not None:
        stats.g1_exps += 6 * m.n
    return EoreCiphertext(sk.j, m.n, tuple(masked))


def eore_gen_cmp_key(j: int, k: int, mk: EoreMasterKey, pp: EorePublicParams, *, rng=None) -> EoreComparisonKey:
    pp.check_client(j)
    pp.check_client(k)
    if j == k:
        raise ValueError("comparison keys are only issued for two distinct clients")
    r = random_scalar(rng)
    rs_j = _fr(r * mk.s[j - 1])
    rs_k = _fr(r * mk.s[k - 1])
    return EoreComparisonKey(
        j, k,
        pp.g_hat * rs_j, mk.h_hat[k - 1] * rs_j,
        pp.g_hat * rs_k, mk.h_hat[j - 1] * rs_k,
    )


def _ratio(part, ka, kb, stats):
    c0, c1 = part
    return pair(c0, ka, stats) / pair(c1, kb, stats)


def eore_compare_mc(ct: EoreCiphertext, ct2: EoreCiphertext, ck: EoreComparisonKey,
                    pp: EorePublicParams | None = None,
                    stats: PairingStats | None = None) -> CmpOutcome:
    """Cross-client comparison; ``4 * msdb + 4`` pairings when plaintexts differ."""
    ck = orient(ct.j, ct2.j, ck)
    if ct.n != ct2.n:
        raise ValueError("bit-length mismatch")
    for i in range(ct.n):
        v = _ratio(ct.part(i, 0), ck.k10, ck.k11, stats)
        v2 = _ratio(ct2.part(i, 0), ck.k00, ck.k01, stats)
        if v != v2:
            lt = _ratio(ct.part(i, 1), ck.k10, ck.k11, stats) == v2
            gt = _ratio(ct2.part(i, 1), ck.k00, ck.k01, stats) == v
            if lt == gt:
                raise IntegrityError(f"no unique direction relation at index {i + 1}")
            return CmpOutcome(int(lt), i + 1)
    return CmpOutcome(0, ct.n + 1)

