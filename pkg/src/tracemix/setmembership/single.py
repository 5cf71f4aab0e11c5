"""Single-prover set membership and reverse set membership.

These are the textbook one-prover protocols the distributed versions grow
from.  They share no code with the distributed proof engine: the
sigma-protocol below is interactive, draws its challenge from the
verifier's own randomness and uses the s = k + c*w response convention, so
it serves as an independent reference for the distributed outcomes.
"""

from ..algebra import GT, Q, pairing
from ..commitments import prove_opening, verify_opening, Opening
from ..signatures import (bb_keygen, bb_sign, bbsplus_keygen, quasi_sign, verq, DegenerateMessageError)


def _power_product(terms, exps):
    acc = None
    for (base, slot) in terms:
        t = base ** (exps[slot] % Q)
        acc = t if acc is None else acc * t
    return acc


def sigma_protocol(statement, witness, prover_rng, verifier_rng):
    """Interactive proof of knowledge of ``witness`` for a conjunction of product-of-powers equations.

    ``statement`` is a list of (target, [(base, slot), ...]).  Returns the
    verifier's verdict.
    """
    k = [prover_rng.scalar() for _ in witness]
    commitments = [_power_product(terms, k) for _, terms in statement]
    c = verifier_rng.scalar()
    s = [(ki + c * wi) % Q for ki, wi in zip(k, witness)]
    for (target, terms), t in zip(statement, commitments):
        if _power_product(terms, s) != t * target ** c:
            return False
    return True


def single_prover_sm(params, gamma, phi, opening, rng):
    """Prove that gamma commits a value in ``phi``; True iff the verifier accepts."""
    v_rng, p_rng = rng.fork("verifier"), rng.fork("prover")
    # verifier: fresh key, one signature per set element
    while True:
        key = bb_keygen(params, v_rng)
        try:
            sigs = {v: bb_sign(params, key, v) for v in phi}
        except DegenerateMessageError:
            continue
        break
    # prover: O(1) lookup and blinding
    b = p_rng.scalar()
    sigma = sigs.get(opening.v % Q)
    # without a signature the honest prover can only blind the fixed fake
    sigma_t = (sigma if sigma is not None else params.g1) ** b
    statement = [
        (gamma, [(params.g1, 0), (params.h1, 1)]),
        (pairing(sigma_t, key.y), [(pairing(params.g1, params.g2), 2), (pairing(sigma_t, params.g2).inverse(), 0)]),
    ]
    return sigma_protocol(statement, [opening.v, opening.r, b], p_rng, v_rng)


def single_prover_rsm(params, commitments, openings, v, rng):
    """Prove that some commitment in the list commits ``v``; True iff the verifier accepts."""
    v_rng, p_rng = rng.fork("verifier"), rng.fork("prover")
    proofs = [prove_opening(params, g, o, p_rng) for g, o in zip(commitments, openings)]
    for g, pr in zip(commitments, proofs):
        if not verify_opening(params, g, pr):
            return False
    key = bbsplus_keygen(params, v_rng)
    quasi = [quasi_sign(params, key, g, v_rng) for g in commitments]
    # prover: index by committed value, derive and blind
    by_value = {o.v % Q: (s, o.r, g) for s, o, g in zip(quasi, openings, commitments)}
    bS, bc, br = p_rng.scalar(), p_rng.scalar(), p_rng.scalar()
    hit = by_value.get(v % Q)
    if hit is None:
        S_t, c_t, r_t = params.g1 ** bS, bc, br
    else:
        s, r, g = hit
        if not verq(params, s, g, key.y):
            return False
        S_t = s.S * params.g1 ** bS
        c_t = (s.c + bc) % Q
        r_t = (s.r_hat + r + br) % Q
    h1 = pairing(params.h1, params.f2).inverse()
    h2 = pairing(params.g1, params.f2).inverse()
    h3 = params.fT
    y_c = key.y * params.f2 ** c_t
    z2 = pairing(S_t, y_c) / pairing(params.f1 * params.g1 ** v * params.h1 ** r_t, params.f2)
    g1t, g2t = pairing(S_t, params.f2), pairing(params.g1, y_c)
    d0 = p_rng.scalar()
    d1, d2 = bS * bc % Q, d0 * bc % Q
    z1 = h2 ** bS * h3 ** d0
    statement = [
        (z1, [(h2, 0), (h3, 3)]),
        (GT.identity(), [(z1.inverse(), 1), (h2, 4), (h3, 5)]),
        (z2, [(g1t, 1), (g2t, 0), (h1, 2), (h2, 4)]),
    ]
    return sigma_protocol(statement, [bS, bc, br, d0, d1, d2], p_rng, v_rng)


__all__ = ["single_prover_sm", "single_prover_rsm", "sigma_protocol", "Opening"]
