"""Per-phase timings of DB-SM and DB-RSM.

Each measurement runs one protocol once on the worst case I = J = [n] after
an untimed setup, key generation and mix.  Server-side phases are summed
over all servers, which run one after another in this process.
"""

import csv
import io

from ..instrument import BENCH_PHASES, PhaseTimer
from ..mixnet import keygen, enc, mix
from ..params import setup
from ..rng import Rng
from ..setmembership.common import Env, ServerInput
from ..setmembership.dbsm import db_sm
from ..setmembership.dbrsm import db_rsm
from .session import make_values

PROTOCOLS = ("db_sm", "db_rsm")
COLUMNS = ("n", "m", "phase", "role", "seconds")


def prepare(n, m, seed, paillier_bits):
    root = Rng(seed)
    params = setup(b"tracemix/bench", m, n)
    server_rngs = [root.fork(f"server{k}") for k in range(m)]
    mpk, secrets = keygen(params, server_rngs, root.fork("dealer"), paillier_bits)
    values = make_values(root.fork("values"), n, 1 << 32)
    cts = [enc(params, mpk, v, root.fork(f"sender{i}")) for i, v in enumerate(values)]
    v_prime, wits = mix(params, mpk, cts, secrets, server_rngs)
    return root, params, mpk, secrets, cts, v_prime, wits, server_rngs


def time_protocol(protocol, prepared, label="bench"):
    """PhaseTimer filled by one run of ``protocol`` on I = J = [n]."""
    root, params, mpk, secrets, cts, v_prime, wits, server_rngs = prepared
    n = len(cts)
    everything = frozenset(range(n))
    servers = [ServerInput(s.k, s.sk_G, w.perm, w.v_shares, w.r_shares, rng.fork(label), s.sk_Z)
               for s, w, rng in zip(secrets, wits, server_rngs)]
    timer = PhaseTimer()
    env = Env(b"bench/" + label.encode(), timer=timer)
    gammas = [c.gamma for c in cts]
    if protocol == "db_sm":
        run = db_sm(params, mpk.pk_G, gammas, v_prime, everything, everything, servers,
                    root.fork("querier/" + label), env)
    elif protocol == "db_rsm":
        run = db_rsm(params, mpk.pk_G, mpk.pk_Z, gammas, [c.rho_gamma for c in cts], [c.eps_r for c in cts],
                     v_prime, everything, everything, servers, root.fork("querier/" + label), env,
                     dealer_rng=root.fork("dealer/" + label))
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    if run.accepted != everything:
        raise RuntimeError(f"{protocol} rejected an honest index during benchmarking")
    return timer


def bench(n_list, m, seed=0, paillier_bits=2048, protocols=PROTOCOLS):
    """Rows of (n, m, phase, role, seconds) with role = '<party>:<protocol>'."""
    rows = []
    for n in n_list:
        prepared = prepare(n, m, seed, paillier_bits)
        for proto in protocols:
            timer = time_protocol(proto, prepared)
            for phase in BENCH_PHASES:
                for (name, role), secs in timer.rows():
                    if name == phase:
                        rows.append((n, m, phase, f"{role}:{proto}", secs))
    return rows


def totals(rows):
    """{(protocol, n): total seconds}."""
    out = {}
    for n, _, _, role, secs in rows:
        key = (role.split(":", 1)[1], n)
        out[key] = out.get(key, 0.0) + secs
    return out


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for n, m, phase, role, secs in rows:
        w.writerow((n, m, phase, role, f"{secs:.6f}"))
    return buf.getvalue()


def write_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
