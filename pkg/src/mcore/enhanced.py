"""Enhanced MC-ORE: a single-client ORE part composed with an EORE part.

Same-client comparisons only ever touch the ORE part; cross-client
comparisons only ever touch the EORE part.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import wire
from .basic import ClientSecretKey, CmpOutcome
from .eore import (
    EoreCiphertext,
    EoreComparisonKey,
    EoreMasterKey,
    EorePublicParams,
    eore_compare_mc,
    eore_encrypt,
    eore_gen_cmp_key,
    eore_gen_key,
    eore_setup,
)
from .ore import OreCiphertext, OreSecretKey, ore_compare, ore_encrypt, ore_setup
from .pairing import DeserializationError, PairingStats


@dataclass(frozen=True)
class EnhancedSecretKey:
    ore: OreSecretKey
    eore: ClientSecretKey

    @property
    def j(self) -> int:
        return self.eore.j

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_ENHANCED_SK)
            + wire.blob(self.ore.to_bytes()) + wire.blob(self.eore.to_bytes())
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "EnhancedSecretKey":
        r = wire.Reader(data, wire.TAG_ENHANCED_SK)
        ore = OreSecretKey.from_bytes(r.blob())
        eore = ClientSecretKey.from_bytes(r.blob())
        r.finish()
        return cls(ore, eore)


@dataclass(frozen=True)
class EnhancedCiphertext:
    oc: OreCiphertext
    ec: EoreCiphertext

    def __post_init__(self):
        if self.oc.n != self.ec.n:
            raise ValueError("ORE and EORE parts disagree on bit-length")

    @property
    def j(self) -> int:
        return self.ec.j

    @property
    def n(self) -> int:
        return self.ec.n

    def to_bytes(self) -> bytes:
        return (
            wire.header(wire.TAG_ENHANCED_CT) + wire.u32(self.j) + wire.u16(self.n)
            + wire.blob(self.oc.to_bytes()) + self.ec.to_bytes()
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "EnhancedCiphertext":
        r = wire.Reader(data, wire.TAG_ENHANCED_CT)
        j, n = r.u32(), r.u16()
        oc = OreCiphertext.from_bytes(r.blob())
        ec = EoreCiphertext.from_bytes(r.take(len(r.data) - r.pos))
        if (ec.j, ec.n, oc.n) != (j, n, n):
            raise DeserializationError("container header disagrees with its parts")
        try:
            return cls(oc, ec)
        except ValueError as exc:
            raise DeserializationError(str(exc)) from exc


def enh_setup(N: int, n: int = 32, *, rng=None) -> tuple[EoreMasterKey, EorePublicParams]:
    return eore_setup(N, n, rng=rng)


def enh_gen_key(j: int, mk: EoreMasterKey, pp: EorePublicParams, *, rng=None) -> EnhancedSecretKey:
    """Draws a fresh ORE key for client j alongside its EORE key."""
    return EnhancedSecretKey(ore_setup(rng=rng), eore_gen_key(j, mk, pp))


def enh_encrypt(m, sk: EnhancedSecretKey, pp: EorePublicParams, *, rng=None,
                stats: PairingStats | None = None) -> EnhancedCiphertext:
    m = pp.plaintext(m)
    return EnhancedCiphertext(ore_encrypt(m, sk.ore), eore_encrypt(m, sk.eore, pp, rng=rng, stats=stats))


def enh_compare(ct: EnhancedCiphertext, ct2: EnhancedCiphertext, pp: EorePublicParams | None = None) -> CmpOutcome:
    if ct.j != ct2.j:
        raise ValueError(
            f"ciphertexts belong to clients {ct.j} and {ct2.j}; use enh_compare_mc with a comparison key"
        )
    return ore_compare(ct.oc, ct2.oc)


def enh_gen_cmp_key(j: int, k: int, mk: EoreMasterKey, pp: EorePublicParams, *, rng=None) -> EoreComparisonKey:
    return eore_gen_cmp_key(j, k, mk, pp, rng=rng)


def enh_compare_mc(ct: EnhancedCiphertext, ct2: EnhancedCiphertext, ck: EoreComparisonKey,
                   pp: EorePublicParams | None = None,
                   stats: PairingStats | None = None) -> CmpOutcome:
    return eore_compare_mc(ct.ec, ct2.ec, ck, pp, stats)
