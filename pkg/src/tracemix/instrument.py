"""Phase timing and fault-injection hooks threaded through the protocols.

Protocol code asks :class:`Hooks` whether to deviate at a named point and
reports elapsed time to a :class:`PhaseTimer`.  The defaults do nothing, so
honest runs pay only a method call.
"""

import time
from collections import defaultdict
from contextlib import contextmanager

BENCH_PHASES = ("signing", "verifying", "shuffle", "blinding", "decryption", "DPK prove", "DPK verify")


class PhaseTimer:
    def __init__(self):
        self.totals = defaultdict(float)

    @contextmanager
    def phase(self, name, role):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.totals[(name, role)] += time.perf_counter() - start

    def total(self):
        return sum(self.totals.values())

    def rows(self):
        return sorted(self.totals.items())


class NullTimer:
    @contextmanager
    def phase(self, name, role):
        yield

    def total(self):
        return 0.0


class Hooks:
    """No deviations.  Subclasses override :meth:`fires` and :meth:`perturb`."""

    def fires(self, phase, server, index):
        return False

    def perturb(self, phase, server, index, value):
        return value

    def for_run(self, label):
        return self


NO_HOOKS = Hooks()
