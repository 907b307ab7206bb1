import hashlib

import pytest

from auditlab.rng import RandomStream


def test_same_seed_same_stream():
    a, b = RandomStream(7), RandomStream(7)
    assert [a.randbelow(10 ** 30) for _ in range(5)] == [b.randbelow(10 ** 30) for _ in range(5)]


def test_seed_types_differ():
    assert RandomStream(1).randbelow(2 ** 64) != RandomStream(2).randbelow(2 ** 64)
    assert RandomStream("x").seed == b"x"


def test_draw_matches_shake_oracle():
    s = RandomStream(b"oracle")
    for counter in range(3):
        block = hashlib.shake_256(b"oracle" + counter.to_bytes(8, "big")).digest(64)
        assert s.randbelow(1000003) == int.from_bytes(block, "big") % 1000003


def test_one_block_per_draw_regardless_of_modulus():
    a, b = RandomStream(5), RandomStream(5)
    a.randbelow(101)
    b.randbelow(2 ** 255)
    assert a.randbelow(2 ** 64) == b.randbelow(2 ** 64)


def test_nonzero_scalar_range():
    s = RandomStream(9)
    values = {s.nonzero_scalar(5) for _ in range(200)}
    assert values == {1, 2, 3, 4}


def test_sample_distinct_and_in_range():
    s = RandomStream(3)
    for _ in range(50):
        picked = s.sample(64, 16)
        assert len(set(picked)) == 16 and all(0 <= v < 64 for v in picked)
    assert sorted(s.sample(5, 5)) == [0, 1, 2, 3, 4]
    with pytest.raises(ValueError):
        s.sample(4, 5)


def test_children_are_independent_and_stable():
    root = RandomStream(11)
    c0, c1 = root.child(0), root.child(1)
    assert c0.seed != c1.seed
    assert root.child(0).seed == c0.seed
    assert root.child("server").seed != root.child("auditor").seed
    root.randbelow(7)
    assert root.child(0).seed == c0.seed


def test_randbelow_rejects_nonpositive():
    with pytest.raises(ValueError):
        RandomStream(1).randbelow(0)
