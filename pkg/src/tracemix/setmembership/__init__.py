"""Distributed set membership (DB-SM), reverse set membership (DB-RSM) and
their single-prover reference versions."""

from .common import ServerInput, QuerierCheckError, SenderProofError
from .dbsm import db_sm, sm_predicate, SMRun
from .dbrsm import db_rsm, rsm_predicate, RSMRun
from .single import single_prover_sm, single_prover_rsm

__all__ = [
    "ServerInput", "QuerierCheckError", "SenderProofError", "db_sm", "sm_predicate", "SMRun",
    "db_rsm", "rsm_predicate", "RSMRun", "single_prover_sm", "single_prover_rsm",
]
