"""Traces, gaps, bounds, equivalence checks and rate fits."""

from .trace import Trace, TraceRow, build_trace
from .gap import ErgodicSpec, ergodic_average, ergodic_gap_series, gap_value
from .bounds import (
    BoundCheck,
    BoundKind,
    back_extrapolated_multiplier,
    bound_constant,
    check_rate_bound,
)
from .equivalence import EquivalenceReport, iterate_equivalence
from .rates import default_window, rate_fit

__all__ = [
    "Trace",
    "TraceRow",
    "build_trace",
    "ErgodicSpec",
    "ergodic_average",
    "ergodic_gap_series",
    "gap_value",
    "BoundCheck",
    "BoundKind",
    "back_extrapolated_multiplier",
    "bound_constant",
    "check_rate_bound",
    "EquivalenceReport",
    "iterate_equivalence",
    "default_window",
    "rate_fit",
]
