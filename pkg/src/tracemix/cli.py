"""Command-line entry point: ``mixnet run | verify | bench``."""

import argparse
import sys

from .algebra import BACKEND
from .harness.bench import bench, write_csv, rows_to_csv, PROTOCOLS
from .harness.config import load_config, ConfigError, SessionConfig, parse_query
from .harness.session import run_session
from .harness.tamper import parse_directive
from .harness.transcript import verify_transcript
from .instrument import PhaseTimer


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def build_parser():
    p = argparse.ArgumentParser(prog="mixnet", description="Traceable mixnet sessions, verification and benchmarks.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a session from a config file")
    run.add_argument("--config", help="session config file (key = value lines)")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--tamper", action="append", default=[], metavar="SPEC",
                     help="fault directive, e.g. server=1,phase=sm.dpk.z,index=auto (repeatable)")
    run.add_argument("--out", help="override the transcript output path")
    run.add_argument("--query", action="append", default=[], metavar="Q",
                     help='extra query, e.g. "trace_in I=all J=0-3" (repeatable)')
    run.add_argument("-n", type=int, help="override n")
    run.add_argument("-m", type=int, help="override m")
    run.add_argument("--timing", action="store_true", help="print per-phase timings")

    ver = sub.add_parser("verify", help="re-verify a session transcript offline")
    ver.add_argument("transcript")

    b = sub.add_parser("bench", help="time DB-SM and DB-RSM phases")
    b.add_argument("--n-list", type=_int_list, default=[256, 512])
    b.add_argument("--m", type=int, default=4)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--paillier-bits", type=int, default=2048)
    b.add_argument("--protocols", default=",".join(PROTOCOLS))
    b.add_argument("--out", help="CSV path (stdout if omitted)")
    return p


def _cmd_run(args):
    cfg = load_config(args.config) if args.config else SessionConfig()
    if args.n is not None:
        cfg.n = args.n
    if args.m is not None:
        cfg.m = args.m
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.output = args.out
    try:
        cfg.queries.extend(parse_query(q, cfg.n) for q in args.query)
        cfg.tampers.extend(parse_directive(t, cfg.m) for t in args.tamper)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    timer = PhaseTimer() if args.timing else None
    res = run_session(cfg, timer=timer)
    print(f"session n={cfg.n} m={cfg.m} seed={cfg.seed} backend={BACKEND}")
    status = 0
    for q, (query, r, exp) in enumerate(zip(cfg.queries, res.results, res.expected)):
        if r.aborted:
            print(f"query {q}: {query} -> ABORT ({r.reason})")
            status = 1
        else:
            got = ",".join(map(str, sorted(r.accepted))) or "-"
            tag = "" if r.accepted == exp else "  [differs from oracle]"
            print(f"query {q}: {query} -> {got}{tag}")
    if cfg.output:
        print(f"transcript written to {cfg.output} ({len(res.transcript)} bytes)")
    if timer is not None:
        for (phase, role), secs in timer.rows():
            print(f"  {phase:<12} {role:<10} {secs:9.3f} s")
    return status


def _cmd_verify(args):
    verdict = verify_transcript(args.transcript)
    print(verdict)
    return 0 if verdict else 1


def _cmd_bench(args):
    protocols = tuple(p for p in args.protocols.split(",") if p)
    rows = bench(args.n_list, args.m, args.seed, args.paillier_bits, protocols)
    if args.out:
        write_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(rows_to_csv(rows))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return {"run": _cmd_run, "verify": _cmd_verify, "bench": _cmd_bench}[args.command](args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
