"""Traceable mixnet with distributed batched set membership and reverse set membership proofs.

Group arithmetic runs on a compiled BN254 core when it is importable and on a
pure-Python implementation otherwise; ``TRACEMIX_BACKEND=python`` forces the
fallback.  ``tracemix.algebra.BACKEND`` names the one in use.
"""

from .algebra import BACKEND
from .params import setup, SetupParams
from .mixnet import (keygen, enc, mix, btrace_in, btrace_out, MixnetPublicKey, MixServerSecret,
                     SenderCiphertext, MixWitness, QueryResult)
from .setmembership import db_sm, db_rsm, single_prover_sm, single_prover_rsm
from .harness.session import run_session
from .harness.transcript import verify_transcript

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "setup", "SetupParams", "keygen", "enc", "mix", "btrace_in", "btrace_out",
    "MixnetPublicKey", "MixServerSecret", "SenderCiphertext", "MixWitness", "QueryResult",
    "db_sm", "db_rsm", "single_prover_sm", "single_prover_rsm", "run_session", "verify_transcript",
]
