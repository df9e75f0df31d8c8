"""Policy-conformance monitor linking TCP/IP events to user/service actions."""

from .config import (
    ConfigError,
    Configuration,
    Mode,
    RepresentationSet,
    ValidationReport,
    Violation,
    build_representations,
    load_config,
    parse_config,
    render_config,
    validate,
)
from .domain import KnownNetwork, SecurityPolicy, Verdict, ip_to_u32, known_net, u32_to_ip
from .monitor import Journals, MonitorState, VerdictRecord, abstract_actions, classify, observe
from .observer import check_invariants, enumerate_verdicts, get_status, trace
from .relations import Relation

__all__ = [
    "ConfigError",
    "Configuration",
    "Journals",
    "KnownNetwork",
    "Mode",
    "MonitorState",
    "Relation",
    "RepresentationSet",
    "SecurityPolicy",
    "ValidationReport",
    "Verdict",
    "VerdictRecord",
    "Violation",
    "abstract_actions",
    "build_representations",
    "check_invariants",
    "classify",
    "enumerate_verdicts",
    "get_status",
    "ip_to_u32",
    "known_net",
    "load_config",
    "observe",
    "parse_config",
    "render_config",
    "trace",
    "u32_to_ip",
    "validate",
]
