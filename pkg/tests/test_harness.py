import csv
import io

import pytest

from tracemix.cli import main
from tracemix.harness.bench import bench, rows_to_csv, totals, COLUMNS, write_csv
from tracemix.harness.config import (parse_config, parse_index_set, format_index_set, parse_query, ConfigError,
                                     SessionConfig, Query)
from tracemix.harness.oracle import oracle, trace_in_oracle, trace_out_oracle
from tracemix.harness.session import run_session, pad_value, unpad_value
from tracemix.harness.tamper import parse_directive, PHASES
from tracemix.harness.transcript import verify_transcript, decode_transcript
from tracemix.instrument import BENCH_PHASES

from conftest import TEST_PAILLIER_BITS

CONFIG = f"""
# small honest session
n = 8
m = 2
seed = 3
paillier_bits = {TEST_PAILLIER_BITS}
query = trace_in I=all J=0-3
query = btrace_out I=0,2,5 J=all
"""


@pytest.fixture(scope="module")
def honest():
    return run_session(parse_config(CONFIG))


# ------------------------------------------------------------ oracle

def test_oracle_by_hand():
    values = [10, 20, 30, 40]
    outputs = [30, 10, 40, 20]
    assert trace_in_oracle(values, outputs, {0, 1, 2}, {0, 1}) == {0, 2}
    assert trace_out_oracle(values, outputs, {0, 3}, {0, 1, 2, 3}) == {1, 2}
    assert oracle("trace_in", values, outputs, set(), {0}) == frozenset()
    with pytest.raises(ValueError):
        oracle("sideways", values, outputs, set(), set())


# ------------------------------------------------------------ config

def test_index_sets():
    assert parse_index_set("all", 4) == {0, 1, 2, 3}
    assert parse_index_set("none", 4) == frozenset()
    assert parse_index_set("0-3,5", 8) == {0, 1, 2, 3, 5}
    assert format_index_set({0, 1, 2, 3, 5, 7, 8}) == "0-3,5,7-8"
    assert format_index_set(set()) == "none"
    with pytest.raises(ValueError):
        parse_index_set("3-1", 8)


def test_query_parsing():
    q = parse_query("btrace_in I=all J=1", 3)
    assert q == Query("trace_in", frozenset({0, 1, 2}), frozenset({1}))
    assert str(q) == "trace_in I=0-2 J=1"
    with pytest.raises(ValueError):
        parse_query("trace_sideways I=all", 3)
    with pytest.raises(ValueError):
        parse_query("trace_in K=1", 3)


def test_config_parsing():
    cfg = parse_config(CONFIG + "tamper = server=1,phase=sm.dpk.z\noutput = x.tmix\n")
    assert (cfg.n, cfg.m, cfg.seed, cfg.paillier_bits) == (8, 2, 3, TEST_PAILLIER_BITS)
    assert [q.kind for q in cfg.queries] == ["trace_in", "trace_out"]
    assert cfg.tampers[0].phase == "sm.dpk.z" and cfg.tampers[0].index == "auto"
    assert cfg.output == "x.tmix"


@pytest.mark.parametrize("text,line", [
    ("n = 4\nbogus = 1\n", 2),
    ("n = 4\nquery = trace_in I=0-9 J=all\n", None),
    ("m = 2\ntamper = server=5,phase=sm.dpk.z\n", None),
    ("n = x\n", 1),
    ("just words\n", 1),
    ("tamper = server=0,phase=nope\n", 1),
])
def test_config_errors(text, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    if line is not None:
        assert err.value.line == line


def test_tamper_directive_parsing():
    d = parse_directive("server=1, phase=rsm.blind.bc, index=3, run=both, query=0, slot=2", m=2)
    assert (d.server, d.phase, d.index, d.run, d.query, d.slot) == (1, "rsm.blind.bc", 3, "both", 0, 2)
    assert d.kind == "trace_out"
    assert parse_directive(str(d)) == d
    for bad in ("phase=sm.dpk.z", "server=0", "server=0,phase=sm.dpk.z,run=sometimes",
                "server=0,phase=sm.dpk.z,colour=red", "server=0 phase=sm.dpk.z"):
        with pytest.raises(ValueError):
            parse_directive(bad)
    with pytest.raises(ValueError):
        parse_directive("server=2,phase=sm.dpk.z", m=2)


def test_tamper_phases_cover_both_protocols():
    kinds = {k for k, _ in PHASES.values()}
    assert kinds == {"trace_in", "trace_out"}
    assert len(PHASES) >= 10


def test_value_padding():
    assert unpad_value(pad_value(7, 12345)) == 7
    assert pad_value(1, 0) == 1 << 64


# ------------------------------------------------------------ sessions and transcripts

def test_session_matches_oracle(honest):
    assert honest.mismatches() == []
    assert honest.results[0].accepted == honest.expected[0]
    assert honest.results[1].accepted == honest.expected[1]


def test_session_replay_is_byte_identical(honest):
    again = run_session(parse_config(CONFIG))
    assert again.transcript == honest.transcript


def test_different_seed_changes_transcript(honest):
    cfg = parse_config(CONFIG)
    cfg.seed = 4
    assert run_session(cfg).transcript != honest.transcript


def test_transcript_verifies(honest):
    verdict = verify_transcript(honest.transcript)
    assert verdict and str(verdict) == "accept"
    t = decode_transcript(honest.transcript)
    assert t.v_prime == honest.v_prime
    assert [q.kind for q in t.queries] == ["trace_in", "trace_out"]


def test_flipped_z_share_names_the_index(honest):
    res = honest.results[0]
    i = min(res.main.accepted)
    proof_bytes = res.main.proofs[i].to_bytes()
    data = bytearray(honest.transcript)
    at = bytes(data).find(proof_bytes)
    assert at > 0
    data[at + len(proof_bytes) - 1] ^= 0x01   # low byte of the last z-share
    verdict = verify_transcript(bytes(data))
    assert not verdict
    assert f"index {i}" in str(verdict)
    assert "main run" in verdict.location


def test_truncated_transcript_is_located(honest):
    verdict = verify_transcript(honest.transcript[:200])
    assert not verdict
    assert verdict.location.startswith("byte ")


def test_bad_magic_and_trailing_bytes(honest):
    assert verify_transcript(b"XXXX" + honest.transcript[4:]).location == "byte 0"
    assert not verify_transcript(honest.transcript + b"\x00")


def test_verify_missing_file(tmp_path):
    verdict = verify_transcript(tmp_path / "absent.tmix")
    assert not verdict and "cannot read" in verdict.message


def test_session_writes_output(tmp_path):
    cfg = parse_config(CONFIG)
    cfg.output = str(tmp_path / "s.tmix")
    res = run_session(cfg)
    assert (tmp_path / "s.tmix").read_bytes() == res.transcript
    assert verify_transcript(cfg.output)


def test_session_rejects_invalid_config():
    cfg = SessionConfig(n=0)
    with pytest.raises(ConfigError):
        run_session(cfg)


# ------------------------------------------------------------ bench

@pytest.fixture(scope="module")
def bench_rows():
    return bench([4], 2, seed=1, paillier_bits=TEST_PAILLIER_BITS)


def test_bench_csv_shape(bench_rows):
    text = rows_to_csv(bench_rows)
    reader = csv.reader(io.StringIO(text))
    assert tuple(next(reader)) == COLUMNS
    body = list(reader)
    assert len(body) == len(bench_rows)
    assert all(float(r[4]) >= 0 for r in body)


def test_bench_phase_labels(bench_rows):
    for proto in ("db_sm", "db_rsm"):
        phases = {phase for _, _, phase, role, _ in bench_rows if role.endswith(proto)}
        assert phases == set(BENCH_PHASES)
    assert set(BENCH_PHASES) == {"signing", "verifying", "shuffle", "blinding", "decryption", "DPK prove",
                                 "DPK verify"}


def test_bench_totals(bench_rows):
    t = totals(bench_rows)
    assert set(t) == {("db_sm", 4), ("db_rsm", 4)}
    assert all(v > 0 for v in t.values())


def test_bench_one_server_faster_than_four():
    t1 = totals(bench([6], 1, seed=2, paillier_bits=TEST_PAILLIER_BITS, protocols=("db_sm",)))
    t4 = totals(bench([6], 4, seed=2, paillier_bits=TEST_PAILLIER_BITS, protocols=("db_sm",)))
    assert t1[("db_sm", 6)] < t4[("db_sm", 6)]


def test_write_csv(tmp_path, bench_rows):
    path = tmp_path / "b.csv"
    write_csv(bench_rows, path)
    assert path.read_text().splitlines()[0] == ",".join(COLUMNS)


# ------------------------------------------------------------ CLI

def test_cli_run_and_verify(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(CONFIG)
    out = tmp_path / "s.tmix"
    assert main(["run", "--config", str(cfg), "--out", str(out), "--timing"]) == 0
    text = capsys.readouterr().out
    assert "query 0: trace_in" in text and "transcript written" in text and "DPK prove" in text
    assert main(["verify", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "accept"


def test_cli_tamper_aborts_and_verify_rejects(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(CONFIG)
    out = tmp_path / "t.tmix"
    code = main(["run", "--config", str(cfg), "--out", str(out), "--tamper", "server=1,phase=sm.dpk.z,index=auto"])
    assert code == 1
    assert "ABORT" in capsys.readouterr().out
    assert main(["verify", str(out)]) == 1
    assert capsys.readouterr().out.startswith("reject at query 0")


def test_cli_query_and_size_overrides(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(f"paillier_bits = {TEST_PAILLIER_BITS}\n")
    assert main(["run", "--config", str(cfg), "-n", "4", "-m", "1", "--seed", "9",
                 "--query", "trace_out I=all J=all"]) == 0
    assert "n=4 m=1 seed=9" in capsys.readouterr().out


def test_cli_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 4\nnonsense\n")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["run", "--config", str(cfg), "--tamper", "server=0"]) == 2


def test_cli_bench(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--n-list", "3", "--m", "1", "--paillier-bits", str(TEST_PAILLIER_BITS),
                 "--protocols", "db_sm", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["phase"] for r in rows} == set(BENCH_PHASES)
    assert all(r["n"] == "3" and r["m"] == "1" for r in rows)
