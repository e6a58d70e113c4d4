"""Conformance verification for ROS 2 system designs."""

from .conformance import (
    DEFAULT_IGNORE_CHANNELS,
    Edge,
    EdgeRole,
    ExpectedGraph,
    MatchPolicy,
    diff_graphs,
    expected_graph,
    observed_edges,
    verify_sources,
    verify_subsystem,
    verify_system,
)
from .errors import (
    CompositionCycleError,
    DanglingReferenceError,
    DuplicateNameError,
    ForeignReportError,
    MissingNodeContextError,
    ModelSyntaxError,
    NameViolationError,
    NonMonotonicSeqError,
    UnknownScopeError,
    UnresolvedPartError,
    VerifyError,
)
from .model import (
    CommChannelDef,
    EndpointDef,
    HardwareDef,
    HardwareMapping,
    NodeDef,
    ParameterDef,
    RequirementDef,
    SourceLayout,
    SystemDef,
    SystemModel,
    element_paths,
    find_system,
    iter_channels,
    iter_endpoints,
    iter_nodes,
    iter_systems,
    parse_model,
    path_of,
    serialize_model,
    validate_model,
)
from .names import is_absolute, is_valid_name, namespace_prefix, resolve_name
from .report import (
    Finding,
    FindingClass,
    Severity,
    Stage,
    VerificationReport,
    report_to_json,
    sort_findings,
)
from .scenario import (
    PlanStage,
    PlanStep,
    ScenarioResult,
    ValidationPlan,
    annotate_activities,
    flatten_plan,
    match_trace,
    result_to_dict,
)
from .snapshot import (
    EventTrace,
    RuntimeNode,
    RuntimeSnapshot,
    SourceRepository,
    SourceSnapshot,
    SourceWorkspace,
    TraceEvent,
    parse_runtime_snapshot,
    parse_source_snapshot,
    parse_trace,
    serialize_runtime_snapshot,
    serialize_source_snapshot,
    serialize_trace,
)
from .traceability import (
    RowStatus,
    TraceabilityMatrix,
    TraceRow,
    build_matrix,
    coverage_summary,
    matrix_to_dicts,
    render_matrix_text,
)

__version__ = "0.1.0"

__all__ = [
    "CommChannelDef",
    "CompositionCycleError",
    "DEFAULT_IGNORE_CHANNELS",
    "DanglingReferenceError",
    "DuplicateNameError",
    "Edge",
    "EdgeRole",
    "EndpointDef",
    "EventTrace",
    "ExpectedGraph",
    "Finding",
    "FindingClass",
    "ForeignReportError",
    "HardwareDef",
    "HardwareMapping",
    "MatchPolicy",
    "MissingNodeContextError",
    "ModelSyntaxError",
    "NameViolationError",
    "NodeDef",
    "NonMonotonicSeqError",
    "ParameterDef",
    "PlanStage",
    "PlanStep",
    "RequirementDef",
    "RowStatus",
    "RuntimeNode",
    "RuntimeSnapshot",
    "ScenarioResult",
    "Severity",
    "SourceLayout",
    "SourceRepository",
    "SourceSnapshot",
    "SourceWorkspace",
    "Stage",
    "SystemDef",
    "SystemModel",
    "TraceEvent",
    "TraceRow",
    "TraceabilityMatrix",
    "UnknownScopeError",
    "UnresolvedPartError",
    "ValidationPlan",
    "VerificationReport",
    "VerifyError",
    "annotate_activities",
    "build_matrix",
    "coverage_summary",
    "diff_graphs",
    "element_paths",
    "expected_graph",
    "find_system",
    "flatten_plan",
    "is_absolute",
    "is_valid_name",
    "iter_channels",
    "iter_endpoints",
    "iter_nodes",
    "iter_systems",
    "match_trace",
    "matrix_to_dicts",
    "namespace_prefix",
    "observed_edges",
    "parse_model",
    "parse_runtime_snapshot",
    "parse_source_snapshot",
    "parse_trace",
    "path_of",
    "render_matrix_text",
    "report_to_json",
    "resolve_name",
    "result_to_dict",
    "serialize_model",
    "serialize_runtime_snapshot",
    "serialize_source_snapshot",
    "serialize_trace",
    "sort_findings",
    "validate_model",
    "verify_sources",
    "verify_subsystem",
    "verify_system",
]
