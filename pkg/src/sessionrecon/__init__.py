"""Link-based web session reconstruction.

Turns raw request logs plus a site topology into every maximal link-valid
navigation sequence per user, with time-only and backtracking baselines,
a brute-force reference, a traffic simulator and a mining/evaluation harness.
"""

from .baselines import Method, ReconstructedSession, navigation_oriented, reconstruct, time_oriented
from .errors import ContractViolation, LogFormatError, OracleRefusal, TopologyParseError
from .log_ingest import PageRequest, UserRequestSequence, group_by_user, parse_log
from .mpvs import MaximalSessionSet, NavSequence, SessionPools, csra_phase2, mpvs_process_session
from .oracle import OracleLimits, brute_force_maximal
from .phase1 import CandidateSession, Thresholds, build_candidate_sessions
from .topology import WebTopology, load_topology

__version__ = "0.1.0"

__all__ = [
    "CandidateSession",
    "ContractViolation",
    "LogFormatError",
    "MaximalSessionSet",
    "Method",
    "NavSequence",
    "OracleLimits",
    "OracleRefusal",
    "PageRequest",
    "ReconstructedSession",
    "SessionPools",
    "Thresholds",
    "TopologyParseError",
    "UserRequestSequence",
    "WebTopology",
    "brute_force_maximal",
    "build_candidate_sessions",
    "csra_phase2",
    "group_by_user",
    "load_topology",
    "mpvs_process_session",
    "navigation_oriented",
    "parse_log",
    "reconstruct",
    "time_oriented",
]
