import hashlib

import pytest

from auditlab.backend import H2S_DST, EncodingError, MockSuite, get_suite
from auditlab.rng import RandomStream

# RFC 9380, appendix J.9.1 (BLS12381G1_XMD:SHA-256_SSWU_RO_)
RFC9380_DST = b"QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_"
RFC9380_X = {
    b"": "052926add2207b76ca4fa57a8734416c8dc95e24501772c814278700eed6d1e4e8cf62d9c09db0fac349612b759e79a1",
    b"abc": "03567bc5ef9c690c2ab2ecdf6a96ef1c139cc0b2f284dca0a9a7943388a49a3aee664ba5379a7655d3c68900be2f6903",
}
# compressed generators in the usual BLS12-381 (zcash) serialization
G1_GEN = "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb"
R_ORDER = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001


def test_real_constants(real):
    assert real.p == R_ORDER
    assert real.g1_gen.to_bytes().hex() == G1_GEN
    assert real.element_size("G1") == 48 and real.element_size("G2") == 96 and real.element_size("GT") == 576


@pytest.mark.parametrize("msg", sorted(RFC9380_X))
def test_hash_to_curve_matches_rfc_vectors(msg):
    from auditlab import _bls12381

    enc = _bls12381.G1.hash(msg, RFC9380_DST).to_bytes()
    assert enc[0] & 0x80  # compressed flag
    x = bytes([enc[0] & 0x1F]) + enc[1:]
    assert x.hex() == RFC9380_X[msg]


def test_pairing_non_degenerate(suite):
    assert suite.pair(suite.g1_gen, suite.g2_gen) != suite.gt_identity


def test_pair_with_identity(suite):
    assert suite.pair(suite.g1_identity, suite.g2_gen) == suite.gt_identity
    assert suite.pair(suite.g1_gen, suite.g2_identity) == suite.gt_identity


def test_bilinearity_small(suite):
    assert suite.pair(suite.g1_gen ** 3, suite.g2_gen ** 5) == suite.gt_gen ** 15


def test_bilinearity_random(suite):
    s = RandomStream("bilinear")
    trials = 100 if suite.backend_id.startswith("mock") else 20
    for _ in range(trials):
        a, b = suite.random_scalar(s), suite.random_scalar(s)
        assert suite.pair(suite.g1_gen ** a, suite.g2_gen ** b) == suite.gt_gen ** (a * b)


@pytest.mark.slow
def test_bilinearity_random_real_100(real):
    s = RandomStream("bilinear-100")
    for _ in range(100):
        a, b = real.random_scalar(s), real.random_scalar(s)
        assert real.pair(real.g1_gen ** a, real.g2_gen ** b) == real.gt_gen ** (a * b)


def test_product_homomorphism(suite):
    s = RandomStream("product")
    for _ in range(20):
        x, y = suite.random_g1(s), suite.random_g1(s)
        z = suite.g2_gen ** suite.random_nonzero(s)
        assert suite.pair(x * y, z) == suite.pair(x, z) * suite.pair(y, z)


def test_group_law_helpers(suite):
    s = RandomStream("law")
    a = suite.random_g1(s)
    assert a * a.inverse() == suite.g1_identity
    assert (a / a).is_identity()
    assert a ** suite.p == suite.g1_identity
    assert a ** -1 == a.inverse()
    t = suite.gt_gen ** 9
    assert t / suite.gt_gen == suite.gt_gen ** 8


@pytest.mark.parametrize("group", ["G1", "G2", "GT"])
def test_serialization_round_trip(suite, group):
    s = RandomStream(f"serde-{group}")
    base = {"G1": suite.g1_gen, "G2": suite.g2_gen, "GT": suite.gt_gen}[group]
    trials = 100 if suite.backend_id.startswith("mock") or group != "GT" else 30
    for _ in range(trials):
        e = base ** suite.random_scalar(s)
        data = e.to_bytes()
        assert len(data) == suite.element_size(group)
        assert suite.decode(group, data) == e
    ident = base ** 0
    assert suite.decode(group, ident.to_bytes()) == ident


def test_decode_rejects_garbage(real):
    with pytest.raises(EncodingError):
        real.decode("G1", b"\x00" * 47)
    with pytest.raises(EncodingError):
        real.decode("G1", b"\xff" * 48)
    bad_gt = bytearray(real.gt_gen.to_bytes())
    bad_gt[5] ^= 1
    with pytest.raises(EncodingError):
        real.decode("GT", bytes(bad_gt))


def test_mock_decode_rejects_non_canonical(mock):
    with pytest.raises(EncodingError):
        mock.decode("G1", bytes([101]))
    with pytest.raises(EncodingError):
        mock.decode("G1", b"\x00\x01")


def test_scalar_codec(suite):
    assert suite.decode_scalar(suite.encode_scalar(suite.p - 1)) == suite.p - 1
    with pytest.raises(EncodingError):
        suite.encode_scalar(suite.p)
    with pytest.raises(EncodingError):
        suite.decode_scalar(suite.p.to_bytes(32, "big"))
    with pytest.raises(EncodingError):
        suite.decode_scalar(b"\x01" * 31)


def test_multi_exp_matches_naive(suite):
    s = RandomStream("msm")
    bases = [suite.random_g1(s) for _ in range(9)]
    exps = [suite.random_scalar(s) for _ in range(9)]
    naive = suite.g1_identity
    for b, k in zip(bases, exps):
        naive = naive * b ** k
    assert suite.multi_exp(bases, exps) == naive


def test_pair_rejects_swapped_groups(suite):
    with pytest.raises(TypeError):
        suite.pair(suite.g2_gen, suite.g1_gen)


def test_mixing_groups_is_an_error(suite):
    with pytest.raises(TypeError):
        suite.g1_gen * suite.gt_gen


# -- hashing -------------------------------------------------------------------

def test_hash_to_g1_deterministic(suite):
    assert suite.hash_to_g1(b"label") == suite.hash_to_g1(b"label")


def test_hash_to_g1_no_collisions(real):
    s = RandomStream("h2g1-collisions")
    seen = set()
    for _ in range(1000):
        label = s.randbelow(2 ** 128).to_bytes(16, "big")
        seen.add(real.hash_to_g1(label).to_bytes())
    assert len(seen) == 1000


def test_hash_to_g1_mock_formula(mock):
    for label in (b"a", b"block-7", bytes(range(40))):
        expected = int.from_bytes(hashlib.sha256(label).digest(), "big") % 101
        assert mock.hash_to_g1(label).exp == expected


def test_hash_to_scalar_deterministic(suite):
    R = suite.gt_gen ** 12345
    assert suite.hash_to_scalar(R) == suite.hash_to_scalar(R)


def test_hash_to_scalar_mock_oracle(mock):
    # serialize (one big-endian byte for p=101), hash with the domain tag, reduce
    for e in range(101):
        digest = hashlib.sha512(b"AUDITLAB-H2S-V1" + bytes([e])).digest()
        assert mock.hash_to_scalar(mock.gt_gen ** e) == int.from_bytes(digest, "big") % 101
    assert H2S_DST == b"AUDITLAB-H2S-V1"


def test_hash_to_scalar_separates_shifted_elements(real):
    s = RandomStream("h2s")
    differ = 0
    for _ in range(1000):
        R = real.gt_gen ** real.random_scalar(s)
        if real.hash_to_scalar(R) != real.hash_to_scalar(R * real.gt_gen):
            differ += 1
    assert differ == 1000


def test_hash_to_scalar_needs_gt(suite):
    with pytest.raises(TypeError):
        suite.hash_to_scalar(suite.g1_gen)


# -- mock oracle -----------------------------------------------------------------

def test_mock_p23_pairing_exponent():
    m = MockSuite(23)
    assert m.pair(m.g1_gen ** 4, m.g2_gen ** 6).exp == 24 % 23 == 1


def test_mock_requires_prime():
    with pytest.raises(ValueError):
        MockSuite(100)


def test_get_suite_ids():
    assert get_suite("mock").p == 101
    assert get_suite("mock:23").p == 23
    assert get_suite("real").backend_id == "real"
    with pytest.raises(ValueError):
        get_suite("curve25519")
