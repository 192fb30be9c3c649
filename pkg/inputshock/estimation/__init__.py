"""Difference-in-differences estimators at the firm and aggregate level."""

from .aggregate import aggregate_probability, aggregate_rows, estimate_aggregate
from .design import POST, TREATMENT, Design, build_design
from .did import estimate_buildup, estimate_did, event_study, t_inference
from .report import format_buildup_table, format_did_report, format_event_study, stars
from .schemas import (
    BUILDUP_LEVELS,
    AggregateRow,
    ControlLevel,
    DidResult,
    DidSpec,
    EventCoefficient,
    EventStudyResult,
    PretrendControls,
    WaldTest,
)

__all__ = [
    "POST",
    "TREATMENT",
    "BUILDUP_LEVELS",
    "ControlLevel",
    "PretrendControls",
    "DidSpec",
    "DidResult",
    "EventCoefficient",
    "EventStudyResult",
    "WaldTest",
    "AggregateRow",
    "Design",
    "build_design",
    "estimate_did",
    "estimate_buildup",
    "event_study",
    "t_inference",
    "aggregate_probability",
    "aggregate_rows",
    "estimate_aggregate",
    "format_buildup_table",
    "format_did_report",
    "format_event_study",
    "stars",
]
