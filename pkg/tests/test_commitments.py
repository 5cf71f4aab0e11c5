from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from tracemix.algebra import G1, Q, g1_multi_exp
from tracemix.algebra.hashing import hash_to_challenge
from tracemix.algebra.encoding import Writer
from tracemix.commitments import (commit, prove_opening, verify_opening, Opening, OpeningProof, POK_TAG)
from tracemix.rng import Rng

scalars = st.integers(min_value=0, max_value=Q - 1)


def simulate_opening_proof(params, gamma, rng):
    """Honest-verifier simulator: pick the response first and solve for a.

    Only valid as a random-oracle simulation when the test also programs the
    challenge, so it is checked against the verification equation directly.
    """
    c, z_v, z_r = rng.scalar(), rng.scalar(), rng.scalar()
    a = g1_multi_exp([gamma, params.g1, params.h1], [c, z_v, z_r])
    return OpeningProof(a, c, z_v, z_r)


def test_zero_and_unit_commitments(params):
    assert commit(params, 0, 0) == G1.identity()
    assert commit(params, 1, 0) == params.g1
    assert commit(params, 0, 1) == params.h1


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars, scalars)
def test_homomorphism(params, v1, r1, v2, r2):
    lhs = commit(params, v1, r1) * commit(params, v2, r2)
    assert lhs == commit(params, (v1 + v2) % Q, (r1 + r2) % Q)


def test_honest_proofs_verify(params):
    rng = Rng(b"pok")
    for _ in range(100):
        o = Opening(rng.scalar(), rng.scalar())
        gamma = commit(params, o.v, o.r)
        assert verify_opening(params, gamma, prove_opening(params, gamma, o, rng))


def test_wrong_statement_rejected(params):
    rng = Rng(b"pok-wrong")
    o = Opening(5, 6)
    gamma = commit(params, o.v, o.r)
    proof = prove_opening(params, gamma, o, rng)
    assert not verify_opening(params, commit(params, 5, 7), proof)


@pytest.mark.parametrize("field", ["z_v", "z_r", "c"])
def test_perturbed_response_rejected(params, field):
    rng = Rng(field)
    o = Opening(rng.scalar(), rng.scalar())
    gamma = commit(params, o.v, o.r)
    proof = prove_opening(params, gamma, o, rng)
    bad = replace(proof, **{field: (getattr(proof, field) + 1) % Q})
    assert not verify_opening(params, gamma, bad)


def test_perturbed_first_message_rejected(params):
    rng = Rng(b"pok-a")
    o = Opening(3, 4)
    gamma = commit(params, o.v, o.r)
    proof = prove_opening(params, gamma, o, rng)
    assert not verify_opening(params, gamma, replace(proof, a=proof.a * params.g1))


def test_mismatched_opening_refused(params):
    with pytest.raises(ValueError):
        prove_opening(params, commit(params, 1, 2), Opening(1, 3), Rng(1))


def test_garbage_inputs_rejected_not_raised(params):
    gamma = commit(params, 1, 2)
    proof = prove_opening(params, gamma, Opening(1, 2), Rng(2))
    assert not verify_opening(params, "gamma", proof)
    assert not verify_opening(params, gamma, replace(proof, z_v=Q))
    assert not verify_opening(params, gamma, replace(proof, a=params.g2))


def test_proof_serialization(params):
    gamma = commit(params, 9, 10)
    proof = prove_opening(params, gamma, Opening(9, 10), Rng(3))
    assert OpeningProof.from_bytes(proof.to_bytes()) == proof
    assert len(proof.to_bytes()) == 33 + 3 * 32


def test_simulated_transcripts_satisfy_equation_but_not_hash(params):
    rng = Rng(b"sim")
    gamma = commit(params, rng.scalar(), rng.scalar())
    for _ in range(10):
        sim = simulate_opening_proof(params, gamma, rng)
        # the verification equation holds for a simulated transcript...
        assert g1_multi_exp([gamma, params.g1, params.h1], [sim.c, sim.z_v, sim.z_r]) == sim.a
        # ...but without control of the hash its challenge is not the Fiat-Shamir one
        body = Writer().raw(params.generator_bytes()).element(gamma).element(sim.a).getvalue()
        assert hash_to_challenge(POK_TAG, body) != sim.c
        assert not verify_opening(params, gamma, sim)


def test_challenge_binds_generators(params):
    from tracemix.params import setup

    other = setup(b"someone-else", 2, 8)
    o = Opening(11, 12)
    gamma = commit(params, o.v, o.r)
    proof = prove_opening(params, gamma, o, Rng(4))
    assert not verify_opening(other, gamma, proof)
