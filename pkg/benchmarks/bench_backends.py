"""Compare the compiled and pure-Python group backends on the hot kernels.

Each backend runs in its own interpreter (the backend is fixed at import),
selected with TRACEMIX_BACKEND.  Usage::

    python benchmarks/bench_backends.py [--reps 5] [--csv out.csv]
"""

import argparse
import csv
import json
import os
import subprocess
import sys

KERNELS = ("g1_mul", "g2_mul", "pairing", "gt_pow", "g1_multi_exp_8", "dpk_prove_bb", "dpk_verify_bb")

_WORKER = r"""
import json, sys, time
from tracemix.algebra import BACKEND, G1, G2, pairing, g1_multi_exp
from tracemix.params import setup
from tracemix.rng import Rng
from tracemix.commitments import commit
from tracemix.dpk import run_dpk, dpk_verify
from tracemix.sharing import share_mm
from tracemix.setmembership.dbsm import sm_predicate
from tracemix.signatures import bb_keygen, bb_sign

reps = int(sys.argv[1])
p = setup(b"bench", 2, 1)
rng = Rng(1)
k = [rng.scalar() for _ in range(8)]
g1, g2 = p.g1, p.g2
gt = pairing(g1, g2)
bases = [g1 ** x for x in k]
key = bb_keygen(p, rng)
v, r, b = rng.scalar(), rng.scalar(), rng.scalar()
gamma = commit(p, v, r)
sig_t = bb_sign(p, key, v) ** b
pred = sm_predicate(p, b"bench", 0, gamma, sig_t, key.y)
wit = list(zip(share_mm(v, 2, rng), share_mm(r, 2, rng), share_mm(b, 2, rng)))
proof = run_dpk(pred, [list(w) for w in wit], [rng.fork("a"), rng.fork("b")])

kernels = {
    "g1_mul": lambda: g1 ** k[0],
    "g2_mul": lambda: g2 ** k[0],
    "pairing": lambda: pairing(g1, g2),
    "gt_pow": lambda: gt ** k[0],
    "g1_multi_exp_8": lambda: g1_multi_exp(bases, k),
    "dpk_prove_bb": lambda: run_dpk(pred, [list(w) for w in wit], [rng.fork("a"), rng.fork("b")]),
    "dpk_verify_bb": lambda: dpk_verify(pred, proof),
}
out = {"backend": BACKEND}
for name, fn in kernels.items():
    fn()
    best = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run_backend(backend, reps):
    env = dict(os.environ, TRACEMIX_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", _WORKER, str(reps)], env=env, capture_output=True, text=True)
    if proc.returncode:
        raise RuntimeError(f"{backend} worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--csv")
    args = ap.parse_args(argv)
    native = run_backend("native", args.reps)
    python = run_backend("python", args.reps)
    rows = [(kname, native[kname], python[kname], python[kname] / native[kname]) for kname in KERNELS]
    print(f"{'kernel':<16}{'native ms':>12}{'python ms':>12}{'speedup':>10}")
    for kname, a, b, s in rows:
        print(f"{kname:<16}{a * 1e3:12.3f}{b * 1e3:12.3f}{s:9.1f}x")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("kernel", "native_seconds", "python_seconds", "speedup"))
            w.writerows(rows)
    return rows


if __name__ == "__main__":
    main()
