import os
import random

import pytest

from mcore.pairing import (
    G1_BYTES,
    G2_BYTES,
    GT_BYTES,
    H1_TAG,
    H2_TAG,
    DeserializationError,
    PairingStats,
    g1_from_bytes,
    g1_generator,
    g1_identity,
    g1_mul,
    g1_to_bytes,
    g2_from_bytes,
    g2_generator,
    g2_identity,
    g2_mul,
    g2_to_bytes,
    gt_from_bytes,
    gt_identity,
    gt_pow,
    gt_to_bytes,
    hash_to_g1,
    hash_to_g2,
    pair,
    random_scalar,
)

# ZCash-format compressed generators of BLS12-381
G1_GEN_HEX = (
    "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
    "6c55e83ff97a1aeffb3af00adb22c6bb"
)
G2_GEN_HEX = (
    "93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
    "334cf11213945d57e5ac7d055d042b7e024aa2b2f08f0a91260805272dc51051"
    "c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8"
)

# RFC 9380 test vectors, msg = "" (J.9.1 and J.10.1), uncompressed x coordinates
RFC_DST_G1 = b"QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_"
RFC_DST_G2 = b"QUUX-V01-CS02-with-BLS12381G2_XMD:SHA-256_SSWU_RO_"
RFC_G1_X = int(
    "052926add2207b76ca4fa57a8734416c8dc95e24501772c814278700eed6d1e4"
    "e8cf62d9c09db0fac349612b759e79a1", 16)
RFC_G2_X_C0 = int(
    "0141ebfbdca40eb85b87142e130ab689c673cf60f1a3e98d69335266f30d9b8d"
    "4ac44c1038e9dcdd5393faf5c41fb78a", 16)
RFC_G2_X_C1 = int(
    "05cb8437535e20ecffaef7752baddf98034139c38452458baeefab379ba13dff"
    "5bf5dd71b72418717047f5b0f37da03d", 16)


def _x_of(enc: bytes) -> int:
    return int.from_bytes(bytes([enc[0] & 0x1F]) + enc[1:], "big")


def test_generators_use_standard_encoding():
    assert g1_to_bytes(g1_generator()).hex() == G1_GEN_HEX
    assert g2_to_bytes(g2_generator()).hex() == G2_GEN_HEX


def test_hash_to_curve_matches_rfc9380_vectors():
    p = hash_to_g1(RFC_DST_G1, b"")
    assert _x_of(g1_to_bytes(p)) == RFC_G1_X
    q = g2_to_bytes(hash_to_g2(RFC_DST_G2, b""))
    # compressed G2 stores x.c1 first, then x.c0
    assert _x_of(q[:48]) == RFC_G2_X_C1
    assert int.from_bytes(q[48:], "big") == RFC_G2_X_C0


def test_hash_is_deterministic_and_counted():
    stats = PairingStats()
    assert hash_to_g1(H1_TAG, b"abc", stats) == hash_to_g1(H1_TAG, b"abc", stats)
    assert hash_to_g2(H2_TAG, b"abc", stats) == hash_to_g2(H2_TAG, b"abc", stats)
    assert stats.hashes_to_curve == 4


def test_hash_rejects_empty_tag():
    with pytest.raises(ValueError):
        hash_to_g1(b"", b"x")
    with pytest.raises(ValueError):
        hash_to_g2(b"", b"x")


def test_hash_g1_no_collisions_over_10k_inputs():
    seen = {g1_to_bytes(hash_to_g1(H1_TAG, os.urandom(16))) for _ in range(10_000)}
    assert len(seen) == 10_000


def test_hash_domain_separation():
    for i in range(200):
        msg = i.to_bytes(4, "big")
        assert hash_to_g1(H1_TAG, msg) != hash_to_g1(b"MCORE-H1-v2", msg)
        assert hash_to_g2(H2_TAG, msg) != hash_to_g2(b"MCORE-H2-v2", msg)


def test_hash_g2_distinct_pair_bases():
    bases = {
        g2_to_bytes(hash_to_g2(H2_TAG, j.to_bytes(4, "big") + k.to_bytes(4, "big")))
        for j in range(1, 21) for k in range(j + 1, 21)
    }
    assert len(bases) == 190


def test_bilinearity_100_random():
    rng = random.Random(1)
    g, gh = g1_generator(), g2_generator()
    base = pair(g, gh)
    for _ in range(100):
        a, b = random_scalar(rng), random_scalar(rng)
        assert pair(g1_mul(g, a), g2_mul(gh, b)) == gt_pow(base, a * b)


def test_pairing_small_identities():
    g, gh = g1_generator(), g2_generator()
    assert pair(g1_mul(g, 2), g2_mul(gh, 3)) == pair(g1_mul(g, 3), g2_mul(gh, 2))
    assert pair(g1_identity(), gh) == gt_identity()
    assert pair(g, g2_identity()) == gt_identity()
    assert pair(g, gh) != gt_identity()


def test_pair_counts_and_stats_reset():
    stats = PairingStats()
    pair(g1_generator(), g2_generator(), stats)
    pair(g1_generator(), g2_generator(), stats)
    assert stats.pairings == 2
    other = PairingStats(pairings=3, g1_exps=1)
    stats.merge(other)
    assert (stats.pairings, stats.g1_exps) == (5, 1)
    stats.reset()
    assert stats == PairingStats()


def test_random_scalar_is_nonzero_and_reproducible():
    a = [random_scalar(random.Random(9)) for _ in range(3)]
    assert a[0] == a[1] == a[2] != 0
    assert random_scalar() != random_scalar()


@pytest.mark.parametrize("to_b, from_b, mul, gen, size", [
    (g1_to_bytes, g1_from_bytes, g1_mul, g1_generator, G1_BYTES),
    (g2_to_bytes, g2_from_bytes, g2_mul, g2_generator, G2_BYTES),
])
def test_point_roundtrip_1000(to_b, from_b, mul, gen, size):
    rng = random.Random(2)
    for _ in range(1000):
        p = mul(gen(), random_scalar(rng))
        enc = to_b(p)
        assert len(enc) == size
        q = from_b(enc)
        assert q == p and to_b(q) == enc


def test_identity_roundtrip():
    assert g1_from_bytes(g1_to_bytes(g1_identity())).isZero()
    assert g2_from_bytes(g2_to_bytes(g2_identity())).isZero()
    assert g1_to_bytes(g1_identity())[0] == 0xC0


def test_gt_roundtrip_1000():
    rng = random.Random(3)
    base = pair(g1_generator(), g2_generator())
    for _ in range(1000):
        x = gt_pow(base, random_scalar(rng))
        enc = gt_to_bytes(x)
        assert len(enc) == GT_BYTES
        assert gt_from_bytes(enc) == x
        assert gt_to_bytes(gt_from_bytes(enc)) == enc


def _flip(data: bytes, bit: int) -> bytes:
    out = bytearray(data)
    out[bit // 8] ^= 0x80 >> (bit % 8)
    return bytes(out)


@pytest.mark.parametrize("to_b, from_b, mul, gen, size", [
    (g1_to_bytes, g1_from_bytes, g1_mul, g1_generator, G1_BYTES),
    (g2_to_bytes, g2_from_bytes, g2_mul, g2_generator, G2_BYTES),
])
def test_point_bitflip_fuzz_1000(to_b, from_b, mul, gen, size):
    """Every flip is rejected except the y-sign bit, which negates the point."""
    rng = random.Random(4)
    sign_bit = 2
    for _ in range(1000):
        p = mul(gen(), random_scalar(rng))
        bit = rng.randrange(size * 8)
        bad = _flip(to_b(p), bit)
        if bit == sign_bit:
            assert from_b(bad) == -p
            continue
        with pytest.raises(DeserializationError):
            from_b(bad)


def test_gt_bitflip_fuzz_1000():
    rng = random.Random(5)
    x = pair(g1_generator(), g2_generator())
    enc = gt_to_bytes(x)
    for _ in range(1000):
        with pytest.raises(DeserializationError):
            gt_from_bytes(_flip(enc, rng.randrange(GT_BYTES * 8)))


def test_non_subgroup_point_rejected():
    # x = 0 is not on E; scan for the first x giving a curve point outside G1
    from mcore.pairing import FIELD, _g1_rhs, _sqrt_fp

    for x in range(1, 200):
        if _sqrt_fp(_g1_rhs(x)) is not None:
            enc = bytearray(x.to_bytes(48, "big"))
            enc[0] |= 0x80
            with pytest.raises(DeserializationError):
                g1_from_bytes(bytes(enc))
            return
    pytest.fail("no curve point found")


@pytest.mark.parametrize("data", [b"", b"\x80" * 47, b"\x00" * 48, b"\xc0" + b"\x00" * 46 + b"\x01"])
def test_malformed_g1_rejected(data):
    with pytest.raises(DeserializationError):
        g1_from_bytes(data)


def test_unreduced_coordinate_rejected():
    from mcore.pairing import FIELD

    enc = bytearray((FIELD + 1).to_bytes(48, "big"))
    enc[0] |= 0x80
    with pytest.raises(DeserializationError):
        g1_from_bytes(bytes(enc))
