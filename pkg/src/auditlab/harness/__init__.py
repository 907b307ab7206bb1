"""Three-party audit simulation, experiments and transcript replay."""

from .config import ExperimentConfig
from .roles import Auditor, Channel, CloudServer, Interceptor, User
from .runner import (
    ExperimentSummary,
    ReplayReport,
    TrialResult,
    World,
    build_world,
    load_world,
    replay,
    reverify,
    run_audit,
    run_experiment,
    run_trial,
)
from .transcript import AuditTranscript, parse_transcript

__all__ = [
    "AuditTranscript", "Auditor", "Channel", "CloudServer", "ExperimentConfig", "ExperimentSummary",
    "Interceptor", "ReplayReport", "TrialResult", "User", "World", "build_world", "load_world",
    "parse_transcript", "replay", "reverify", "run_audit", "run_experiment", "run_trial",
]
