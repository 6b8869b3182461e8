"""Repeated opinion polls for decentralised organisations, NIWA stability
scores, and control-chart monitoring of the score series."""
from .core import (ElectionPhase, IdentityProof, IntervalId, Proposal, ProposalKind,
                   Stakeholder, Tally, VoteChoice)
from .ledger import BoothAssignment, VoteLedger, aggregate, assign_booths
from .metrics import NiwaScore, QuadrilateralSnapshot, niwa, niwa_series, nwa, \
    quadrilateral_snapshot, total_votes
from .charts import ControlChart, EwmaConfig, Side, detect_violations, ewma_chart, i_chart, \
    moving_ranges, mr_chart
from .triggers import BlockHeightProof, OracleQuorumProof, verify_interval_proof
from .sim import DriftingSamplerConfig, UniformSamplerConfig, run_experiment
from .serialize import parse_ledger, serialise_ledger

__version__ = "0.1.0"
