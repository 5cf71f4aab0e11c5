import pytest

from tracemix.algebra import Q
from tracemix.harness.bus import Bus, ProtocolError
from tracemix.rng import Rng
from tracemix.sharing import share_mm, recons, deal_triples, mult, TripleReuseError


def test_single_party():
    assert share_mm(0, 1, Rng(1)) == [0]
    assert share_mm(42, 1, Rng(1)) == [42]


def test_round_trip():
    rng = Rng(b"share")
    for t in range(100):
        x, m = rng.scalar(), 2 + t % 3
        shares = share_mm(x, m, rng)
        assert len(shares) == m
        assert recons(shares) == x


def test_additivity():
    rng = Rng(b"add")
    for _ in range(50):
        x, y = rng.scalar(), rng.scalar()
        sx, sy = share_mm(x, 3, rng), share_mm(y, 3, rng)
        assert recons([a + b for a, b in zip(sx, sy)]) == (x + y) % Q


def test_bad_arguments():
    with pytest.raises(ValueError):
        share_mm(1, 0, Rng(1))
    with pytest.raises(ValueError):
        recons([])


def test_single_share_looks_uniform():
    # chi-squared smoke test: party 0's share of a fixed secret, bucketed by its top bits
    rng = Rng(b"chi2")
    buckets, trials = 16, 4000
    counts = [0] * buckets
    for _ in range(trials):
        s = share_mm(12345, 3, rng)[0]
        counts[s * buckets // Q] += 1
    expected = trials / buckets
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    # 15 degrees of freedom, 0.999 quantile is about 37.7
    assert chi2 < 37.7


def test_dealt_triples_are_products():
    rng = Rng(b"triples")
    for m in (1, 2, 4):
        for t in deal_triples(m, 25, rng):
            assert recons(t.a) * recons(t.b) % Q == recons(t.c)


def test_m1_triple_is_plain():
    (t,) = deal_triples(1, 1, Rng(2))
    assert t.c[0] == t.a[0] * t.b[0] % Q


def test_mult_correct():
    rng = Rng(b"mult")
    for t in range(100):
        m = (2, 4)[t % 2]
        x, y = rng.scalar(), rng.scalar()
        (triple,) = deal_triples(m, 1, rng)
        z = mult(share_mm(x, m, rng), share_mm(y, m, rng), triple)
        assert recons(z) == x * y % Q


def test_mult_absorbing_and_identity():
    rng = Rng(b"mult-edge")
    y = rng.scalar()
    t0, t1 = deal_triples(3, 2, rng)
    assert recons(mult(share_mm(0, 3, rng), share_mm(y, 3, rng), t0)) == 0
    assert recons(mult(share_mm(1, 3, rng), share_mm(y, 3, rng), t1)) == y


def test_triples_single_use():
    rng = Rng(b"reuse")
    (t,) = deal_triples(2, 1, rng)
    mult(share_mm(2, 2, rng), share_mm(3, 2, rng), t)
    with pytest.raises(TripleReuseError):
        mult(share_mm(2, 2, rng), share_mm(3, 2, rng), t)


def test_mult_over_bus_broadcasts_openings():
    rng = Rng(b"bus")
    bus = Bus(b"s", keep_log=True)
    (t,) = deal_triples(3, 1, rng)
    z = mult(share_mm(6, 3, rng), share_mm(7, 3, rng), t, bus=bus, phase="m")
    assert recons(z) == 42
    assert [msg.sender for msg in bus.log] == ["server0", "server1", "server2"]
    assert all(msg.recipient is None for msg in bus.log)


def test_mult_rejects_mismatched_lengths():
    rng = Rng(b"len")
    (t,) = deal_triples(2, 1, rng)
    with pytest.raises(ValueError):
        mult([1, 2, 3], [1, 2], t)


def test_bus_missing_message_is_protocol_error():
    bus = Bus()
    with pytest.raises(ProtocolError):
        bus.receive_one("server0", "nothing", "server1")
