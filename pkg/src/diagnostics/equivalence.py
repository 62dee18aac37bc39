"""Iterate-level comparison of two solver runs."""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from ..exceptions import ParameterError, TraceError
from .trace import Trace, TraceRow


RowMap = Callable[[TraceRow], np.ndarray]
Rows = Union[Trace, Sequence[np.ndarray]]


@dataclass
class EquivalenceReport:
    """Outcome of iterate_equivalence.

    Attributes:
        ok: Every compared k within tolerance
        first_divergence: First k over tolerance, or None
        deviations: Relative deviation ‖map(a^k) − b^k‖ / (1 + ‖b^k‖) per k
        tol: Tolerance used
    """

    ok: bool
    first_divergence: Optional[int]
    tol: float
    deviations: List[float] = field(default_factory=list, repr=False)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0

    def describe(self) -> str:
        if self.ok:
            return f"PASS (max deviation {self.max_deviation:.3e} <= {self.tol:g})"
        return (f"FAIL at k={self.first_divergence} "
                f"(deviation {self.deviations[self.first_divergence]:.3e} > {self.tol:g})")


def _vectors(rows: Rows, mapping: Optional[RowMap]) -> List[np.ndarray]:
    if isinstance(rows, Trace):
        fn = mapping or TraceRow.vector
        return [np.asarray(fn(row), dtype=float) for row in rows]
    if mapping is not None:
        return [np.asarray(mapping(row), dtype=float) for row in rows]
    return [np.asarray(row, dtype=float) for row in rows]


def iterate_equivalence(
    trace_a: Rows,
    trace_b: Rows,
    mapping: Optional[RowMap] = None,
    tol: float = 1e-8,
    K: Optional[int] = None,
) -> EquivalenceReport:
    """Compare map(a^k) with b^k for k = 0..K.

    Trace rows default to the stacked (x, λ) vector on both sides; ``mapping``
    is applied to trace_a only.

    Raises:
        TraceError: a trace has fewer than K+1 rows
    """
    if tol <= 0:
        raise ParameterError("tol must be positive", context={"tol": tol})
    a = _vectors(trace_a, mapping)
    b = _vectors(trace_b, None)
    if K is None:
        K = min(len(a), len(b)) - 1
    if len(a) < K + 1 or len(b) < K + 1:
        raise TraceError("Trace too short for comparison",
                         context={"rows_a": len(a), "rows_b": len(b), "K": K})
    deviations = []
    first = None
    for k in range(K + 1):
        if a[k].shape != b[k].shape:
            raise TraceError("Mapped rows differ in shape",
                             context={"k": k, "a": a[k].shape, "b": b[k].shape})
        dev = float(np.linalg.norm(a[k] - b[k]) / (1.0 + np.linalg.norm(b[k])))
        deviations.append(dev)
        if first is None and dev > tol:
            first = k
    return EquivalenceReport(ok=first is None, first_divergence=first, tol=tol, deviations=deviations)
