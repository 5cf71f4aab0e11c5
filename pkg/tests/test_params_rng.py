import collections

import pytest

from tracemix.algebra import Q
from tracemix.algebra.encoding import DecodeError
from tracemix.params import setup, read_params
from tracemix.rng import Rng


def _is_probable_prime(n):
    # deterministic Miller-Rabin bases are enough for a spot check
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_group_order_is_prime():
    assert _is_probable_prime(Q)
    assert Q.bit_length() == 254


def test_setup_deterministic():
    a = setup("A", 2, 4)
    b = setup(b"A", 2, 4)
    assert a.to_bytes() == b.to_bytes()
    assert setup(b"B", 2, 4).to_bytes() != a.to_bytes()


def test_generators_nontrivial_and_distinct(params):
    for g in params.generators():
        assert not g.is_identity()
    assert len({params.f1, params.g1, params.h1}) == 3
    assert params.f2 != params.g2


def test_params_round_trip(params):
    again = read_params(params.to_bytes())
    assert again == params


def test_params_with_foreign_generators_rejected(params):
    data = bytearray(params.to_bytes())
    # replace f1 with g1 (both are 33 bytes right after the header)
    head = 4 + len(params.seed) + 8
    data[head:head + 33] = data[head + 33:head + 66]
    with pytest.raises(DecodeError):
        read_params(bytes(data))


def test_setup_rejects_empty_sizes():
    with pytest.raises(ValueError):
        setup(b"x", 0, 4)


def test_rng_replay_and_fork_independence():
    a, b = Rng(5), Rng(5)
    assert [a.scalar() for _ in range(5)] == [b.scalar() for _ in range(5)]
    root = Rng(5)
    x1 = root.fork("alice")
    root.scalar()
    x2 = Rng(5).fork("alice")
    assert x1.randbytes(40) == x2.randbytes(40)
    assert Rng(5).fork("alice").randbytes(16) != Rng(5).fork("bob").randbytes(16)


def test_rng_below_and_permutation():
    rng = Rng(b"perm")
    for n in (1, 2, 7, 30):
        perm = rng.permutation(n)
        assert sorted(perm) == list(range(n))
    counts = collections.Counter(rng.below(3) for _ in range(3000))
    assert set(counts) == {0, 1, 2}
    assert all(800 < c < 1200 for c in counts.values())
    with pytest.raises(ValueError):
        rng.below(0)


def test_rng_subset_probability():
    rng = Rng(b"subset")
    sizes = [len(rng.subset(100, 0.3)) for _ in range(50)]
    assert 20 < sum(sizes) / len(sizes) < 40
    assert rng.subset(10, 0.0) == frozenset()
