"""(m, m) additive secret sharing over Z_q and Beaver-triple multiplication."""

from dataclasses import dataclass, field

from .algebra import Q
from .algebra.encoding import Writer, Reader


class TripleReuseError(RuntimeError):
    """A Beaver triple was consumed twice."""


def share_mm(x, m, rng, q=Q):
    """First m-1 shares uniform, the last one x minus their sum."""
    if m < 1:
        raise ValueError("need at least one party")
    shares = [rng.below(q) for _ in range(m - 1)]
    shares.append((x - sum(shares)) % q)
    return shares


def recons(shares, q=Q):
    if not shares:
        raise ValueError("no shares to reconstruct")
    return sum(shares) % q


@dataclass
class BeaverTriple:
    """Shares of (a, b, ab); single use."""

    a: list
    b: list
    c: list
    used: bool = field(default=False)

    def consume(self):
        if self.used:
            raise TripleReuseError("Beaver triple already consumed")
        self.used = True
        return self.a, self.b, self.c


def deal_triples(m, count, rng, q=Q):
    """Trusted-dealer precomputation of ``count`` independent triples."""
    out = []
    for _ in range(count):
        a, b = rng.below(q), rng.below(q)
        out.append(BeaverTriple(share_mm(a, m, rng, q), share_mm(b, m, rng, q), share_mm(a * b % q, m, rng, q)))
    return out


def mult_open(x_k, y_k, a_k, b_k, q=Q):
    """Party k's broadcast: its shares of x - a and y - b."""
    return (x_k - a_k) % q, (y_k - b_k) % q


def mult_close(k, d, e, a_k, b_k, c_k, q=Q):
    """Party k's share of xy once d = x - a and e = y - b are public."""
    z = (c_k + d * b_k + e * a_k) % q
    if k == 0:
        z = (z + d * e) % q
    return z


def mult(x_shares, y_shares, triple, bus=None, phase="mult", q=Q):
    """Run Mult for all parties; returns the parties' shares of x*y.

    With a bus, each party's opening goes out as a broadcast and the
    reconstruction reads them back, so a missing party surfaces as a
    protocol error.
    """
    m = len(x_shares)
    if len(y_shares) != m:
        raise ValueError("share vectors of different lengths")
    a, b, c = triple.consume()
    if len(a) != m:
        raise ValueError("triple dealt for a different number of parties")
    opened = [mult_open(x_shares[k], y_shares[k], a[k], b[k], q) for k in range(m)]
    if bus is not None:
        for k, (dk, ek) in enumerate(opened):
            bus.broadcast(phase, f"server{k}", Writer().bigint(dk).bigint(ek).getvalue())
        opened = []
        for payload in bus.gather("any", phase, [f"server{k}" for k in range(m)]):
            rd = Reader(payload)
            opened.append((rd.bigint(), rd.bigint()))
        bus.clear_phase(phase)
    d = sum(o[0] for o in opened) % q
    e = sum(o[1] for o in opened) % q
    return [mult_close(k, d, e, a[k], b[k], c[k], q) for k in range(m)]
