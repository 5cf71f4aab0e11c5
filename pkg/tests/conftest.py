import os
import sys

import pytest

from tracemix.algebra import BACKEND
from tracemix.mixnet import keygen, enc, mix
from tracemix.params import setup
from tracemix.rng import Rng
from tracemix.harness.session import make_values

# Unit tests use a short Paillier modulus to stay quick; the acceptance suite
# runs at the production size.
TEST_PAILLIER_BITS = 1024

sys.path.insert(0, os.path.dirname(__file__))


def pytest_report_header(config):
    return f"tracemix backend: {BACKEND}"


@pytest.fixture(scope="session")
def params():
    return setup(b"tracemix/tests", 2, 8)


@pytest.fixture
def rng(request):
    return Rng(request.node.name)


class Mixed:
    """A keyed and mixed instance, ready for tracing queries."""

    def __init__(self, n, m, seed, bits=TEST_PAILLIER_BITS, values=None):
        root = Rng(seed)
        self.root = root
        self.params = setup(b"tracemix/tests/mixed", m, n)
        self.server_rngs = [root.fork(f"server{k}") for k in range(m)]
        self.mpk, self.secrets = keygen(self.params, self.server_rngs, root.fork("dealer"), bits)
        self.values = values if values is not None else make_values(root.fork("values"), n, 1 << 32)
        self.cts = [enc(self.params, self.mpk, v, root.fork(f"sender{i}")) for i, v in enumerate(self.values)]
        self.v_prime, self.witnesses = mix(self.params, self.mpk, self.cts, self.secrets, self.server_rngs)
        self.n, self.m = n, m
        self._runs = 0

    @property
    def gammas(self):
        return [c.gamma for c in self.cts]

    def servers(self, label=None):
        from tracemix.setmembership import ServerInput

        self._runs += 1
        label = label or f"run{self._runs}"
        return [ServerInput(s.k, s.sk_G, w.perm, w.v_shares, w.r_shares, rng.fork(label), s.sk_Z)
                for s, w, rng in zip(self.secrets, self.witnesses, self.server_rngs)]

    def querier(self, label="querier"):
        self._runs += 1
        return self.root.fork(f"{label}/{self._runs}")


_MIXED = {}


def mixed_instance(n, m, seed=0):
    key = (n, m, seed)
    if key not in _MIXED:
        _MIXED[key] = Mixed(n, m, seed)
    return _MIXED[key]


@pytest.fixture(scope="session")
def mixed_small():
    return mixed_instance(6, 2, 11)


# one PASS/FAIL line per acceptance criterion, repeated at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
