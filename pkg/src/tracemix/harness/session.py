"""End-to-end sessions: setup, senders, mixing and a list of tracing queries."""

import hashlib
from dataclasses import dataclass, field

from ..instrument import NullTimer
from ..mixnet import keygen, enc, mix, btrace_in, btrace_out, TRACE_IN
from ..params import setup
from ..rng import Rng
from ..setmembership.common import Env
from ..threshold.shuffle import composed_permutation
from .bus import Bus
from .oracle import oracle
from .tamper import TamperHooks
from . import transcript as tx

NONCE_BITS = 64


def pad_value(base, nonce):
    """Append a 64-bit nonce so equal raw values become distinct scalars."""
    return (base << NONCE_BITS) | nonce


def unpad_value(v):
    return v >> NONCE_BITS


def make_values(rng, n, value_space):
    """Raw values from ``[0, value_space)``, nonce-padded and redrawn until distinct."""
    values, seen = [], set()
    for i in range(n):
        srng = rng.fork(f"value{i}")
        base = srng.below(value_space)
        while True:
            v = pad_value(base, srng.randbits(NONCE_BITS))
            if v not in seen:
                break
        seen.add(v)
        values.append(v)
    return values


def session_id(seed):
    return hashlib.sha256(b"tracemix/session" + int(seed).to_bytes(16, "big", signed=True)).digest()[:16]


def query_context(sid, query_no):
    return b"tmix/" + sid + query_no.to_bytes(4, "big")


@dataclass
class SessionResult:
    config: object
    session_id: bytes
    params: object
    mpk: object
    ciphertexts: list
    values: list
    v_prime: list
    permutation: list
    results: list
    expected: list
    transcript: bytes = b""
    bus: Bus = None
    timer: object = None
    internals: dict = field(default_factory=dict)

    def mismatches(self):
        """Queries whose outcome differs from the oracle (or that aborted)."""
        bad = []
        for q, (res, exp) in enumerate(zip(self.results, self.expected)):
            if res.aborted or res.accepted != exp:
                bad.append(q)
        return bad


def run_session(config, whitebox=False, keep_log=False, timer=None, write=True):
    """Run every configured query; writes the transcript to ``config.output`` when set."""
    config.validate()
    timer = timer or NullTimer()
    root = Rng(config.seed)
    sid = session_id(config.seed)
    params = setup(b"tracemix/" + sid, config.m, config.n)
    server_rngs = [root.fork(f"server{k}") for k in range(config.m)]
    mpk, secrets = keygen(params, server_rngs, root.fork("dealer"), config.paillier_bits)

    values = make_values(root.fork("values"), config.n, config.value_space)
    ciphertexts = [enc(params, mpk, v, root.fork(f"sender{i}")) for i, v in enumerate(values)]
    bus = Bus(sid, keep_log=keep_log)
    v_prime, witnesses = mix(params, mpk, ciphertexts, secrets, server_rngs, bus=bus, timer=timer)
    perm = composed_permutation([w.perm for w in witnesses])

    results, expected = [], []
    querier = root.fork("querier")
    for q, query in enumerate(config.queries):
        exp = oracle(query.kind, values, v_prime, query.I, query.J)
        expected.append(exp)
        hooks = TamperHooks.for_query(config.tampers, q, query.kind, exp)
        env = Env(query_context(sid, q), bus, timer, hooks, whitebox)
        qrngs = [r.fork(f"query{q}") for r in server_rngs]
        if query.kind == TRACE_IN:
            res = btrace_in(params, mpk, ciphertexts, v_prime, query.I, query.J, secrets, witnesses,
                            qrngs, querier.fork(f"query{q}"), env)
        else:
            res = btrace_out(params, mpk, ciphertexts, v_prime, query.I, query.J, secrets, witnesses,
                             qrngs, querier.fork(f"query{q}"), env, dealer_rng=root.fork(f"dealer/query{q}"))
        results.append(res)
        if not keep_log:
            bus.clear()

    result = SessionResult(config, sid, params, mpk, ciphertexts, values, v_prime, perm, results, expected,
                           bus=bus, timer=timer)
    if whitebox:
        result.internals = {"witnesses": witnesses, "secrets": secrets}
    result.transcript = tx.encode_transcript(sid, params, mpk, ciphertexts, v_prime, results)
    if write and config.output:
        with open(config.output, "wb") as fh:
            fh.write(result.transcript)
    return result
