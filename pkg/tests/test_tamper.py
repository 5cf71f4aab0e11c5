"""Fault injection: every directive ends in rejection, abort or an unchanged correct answer."""

import pytest

from tracemix.harness.config import SessionConfig, parse_query
from tracemix.harness.session import run_session
from tracemix.harness.tamper import PHASES, parse_directive, TamperHooks
from tracemix.harness.transcript import verify_transcript

from conftest import TEST_PAILLIER_BITS

N, M = 6, 2


def session(directives, seed=21):
    cfg = SessionConfig(n=N, m=M, seed=seed, paillier_bits=TEST_PAILLIER_BITS)
    cfg.queries = [parse_query("trace_in I=all J=0-2", N), parse_query("trace_out I=0-2 J=all", N)]
    cfg.tampers = [parse_directive(d, M) for d in directives]
    return run_session(cfg)


def assert_contained(res):
    """No query accepts anything outside the oracle's answer."""
    for r, exp in zip(res.results, res.expected):
        if r.aborted:
            assert r.accepted is None
        else:
            assert r.accepted <= exp
        if r.main is not None:
            assert r.main.accepted <= exp


@pytest.fixture(scope="module")
def honest():
    return session([])


def test_honest_baseline(honest):
    assert honest.mismatches() == []
    assert verify_transcript(honest.transcript)


@pytest.mark.parametrize("phase", sorted(PHASES))
def test_member_suppression_triggers_abort(phase, honest):
    res = session([f"server=1,phase={phase},index=auto"])
    assert_contained(res)
    q = 0 if PHASES[phase][0] == "trace_in" else 1
    target = res.results[q]
    assert target.aborted, f"{phase} did not abort"
    assert min(res.expected[q]) in target.missing
    # the other query kind is untouched
    other = res.results[1 - q]
    assert not other.aborted and other.accepted == res.expected[1 - q]
    verdict = verify_transcript(res.transcript)
    assert not verdict
    assert verdict.location.startswith(f"query {q}")


def test_complement_run_tamper_is_caught(honest):
    # an input whose value lands outside J, so only the complement run can prove it
    exp_in = honest.expected[0]
    outside = min(set(range(N)) - exp_in)
    res = session([f"server=0,phase=sm.dpk.z,index={outside},run=complement,query=0"])
    assert_contained(res)
    assert res.results[0].aborted
    assert outside in res.results[0].missing
    assert not verify_transcript(res.transcript)


def test_tampering_a_non_member_changes_nothing_visible(honest):
    exp_in = honest.expected[0]
    outside = min(set(range(N)) - exp_in)
    res = session([f"server=1,phase=sm.dpk.witness,index={outside},run=main,query=0"])
    assert_contained(res)
    assert not res.results[0].aborted
    assert res.results[0].accepted == exp_in


def test_both_runs_tampered(honest):
    res = session(["server=0,phase=rsm.dpk.z,index=auto,run=both", "server=1,phase=sm.sigma.fake,run=both"])
    assert_contained(res)
    assert res.results[0].aborted and res.results[1].aborted


def test_witness_slot_selection(honest):
    for slot in range(3):
        res = session([f"server=0,phase=sm.dpk.witness,index=auto,slot={slot},query=0"])
        assert_contained(res)
        assert res.results[0].aborted


def test_auto_index_skips_empty_expectations():
    hooks = TamperHooks.for_query([parse_directive("server=0,phase=sm.dpk.z")], 0, "trace_in", frozenset())
    assert hooks.active == []
    hooks = TamperHooks.for_query([parse_directive("server=0,phase=sm.dpk.z")], 0, "trace_in", frozenset({4, 2}))
    assert hooks.active[0][1] == 2
    assert hooks.for_run("complement").active == []
    assert hooks.perturb("sm.dpk.z", 0, 2, (5, 6)) == (6, 6)
    assert hooks.perturb("sm.dpk.z", 1, 2, (5, 6)) == (5, 6)
