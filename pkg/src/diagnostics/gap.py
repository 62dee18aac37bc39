"""Saddle-point gap and ergodic averages with explicit index offsets.

For weights w_k (k = 0..K) the averages are

    x̂^K = Σ w_k x^{k + x_offset} / Σ w_k
    λ̂^K = Σ w_k λ^{k + lambda_offset} / Σ w_k

Uniform weights with x_offset=1, lambda_offset=0 give the balanced-ALM average;
lambda_offset=1 gives the dual-primal one. Schedule weights w_k = r^k give the
accelerated versions.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ParameterError, TraceError
from .trace import Trace


def gap_value(problem, x_hat, lambda_hat, x_ref, lambda_ref) -> float:
    """f(x̂) + λ_refᵀ(Ax̂ − b) − f(x_ref) − λ̂ᵀ(Ax_ref − b)."""
    x_hat = np.asarray(x_hat, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    return float(
        problem.value(x_hat)
        + np.asarray(lambda_ref) @ problem.residual(x_hat)
        - problem.value(x_ref)
        - np.asarray(lambda_hat) @ problem.residual(x_ref)
    )


@dataclass(frozen=True)
class ErgodicSpec:
    """Averaging rule: weights plus the x/λ index offsets.

    Attributes:
        weight: None for uniform weights, otherwise k ↦ w_k > 0 (e.g. a schedule's r)
        x_index_offset: Offset of the averaged x (0 or 1)
        lambda_index_offset: Offset of the averaged λ (0 or 1)
    """

    weight: Optional[Callable[[int], float]] = None
    x_index_offset: int = 1
    lambda_index_offset: int = 0

    def __post_init__(self):
        for name in ("x_index_offset", "lambda_index_offset"):
            if getattr(self, name) not in (0, 1):
                raise ParameterError(f"{name} must be 0 or 1", context={name: getattr(self, name)})

    @classmethod
    def balanced(cls, weight: Optional[Callable[[int], float]] = None) -> "ErgodicSpec":
        return cls(weight=weight, x_index_offset=1, lambda_index_offset=0)

    @classmethod
    def dual_primal(cls, weight: Optional[Callable[[int], float]] = None) -> "ErgodicSpec":
        return cls(weight=weight, x_index_offset=1, lambda_index_offset=1)

    def weights(self, K: int) -> np.ndarray:
        if self.weight is None:
            return np.ones(K + 1)
        w = np.array([float(self.weight(k)) for k in range(K + 1)])
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ParameterError("Ergodic weights must be positive")
        return w

    def required_rows(self, K: int) -> int:
        return K + 1 + max(self.x_index_offset, self.lambda_index_offset)


SequenceLike = Union[Trace, Tuple[Sequence[np.ndarray], Sequence[np.ndarray]]]


def _sequences(trace: SequenceLike) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(trace, Trace):
        return trace.xs, trace.lams
    xs, lams = trace
    return np.asarray(xs, dtype=float), np.asarray(lams, dtype=float)


def ergodic_average(trace: SequenceLike, spec: ErgodicSpec, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """(x̂^K, λ̂^K) under spec.

    Args:
        trace: A Trace or a pair of stacked (xs, lams) arrays indexed from k=0
        spec: Averaging rule
        K: Last averaging index

    Raises:
        TraceError: trace too short for K and the offsets
    """
    xs, lams = _sequences(trace)
    needed = spec.required_rows(K)
    if len(xs) < needed or len(lams) < needed:
        raise TraceError(
            "Trace too short for ergodic average",
            context={"rows": min(len(xs), len(lams)), "required": needed, "K": K}
        )
    w = spec.weights(K)
    ox, ol = spec.x_index_offset, spec.lambda_index_offset
    x_hat = w @ xs[ox:ox + K + 1] / w.sum()
    lam_hat = w @ lams[ol:ol + K + 1] / w.sum()
    return x_hat, lam_hat


def ergodic_gap_series(
    problem,
    trace: SequenceLike,
    spec: ErgodicSpec,
    x_ref,
    lambda_ref,
    horizon: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Gap of the ergodic averages for K = 0..horizon via cumulative sums.

    Returns:
        (gaps, weight_sums) arrays of length horizon + 1
    """
    xs, lams = _sequences(trace)
    extra = max(spec.x_index_offset, spec.lambda_index_offset)
    available = min(len(xs), len(lams)) - 1 - extra
    if horizon is None:
        horizon = available
    if horizon < 0 or horizon > available:
        raise TraceError(
            "Trace too short for gap series",
            context={"rows": min(len(xs), len(lams)), "horizon": horizon}
        )
    w = spec.weights(horizon)
    ox, ol = spec.x_index_offset, spec.lambda_index_offset
    wsum = np.cumsum(w)
    x_hats = np.cumsum(w[:, None] * xs[ox:ox + horizon + 1], axis=0) / wsum[:, None]
    lam_hats = np.cumsum(w[:, None] * lams[ol:ol + horizon + 1], axis=0) / wsum[:, None]
    gaps = np.array([
        gap_value(problem, x_hats[K], lam_hats[K], x_ref, lambda_ref) for K in range(horizon + 1)
    ])
    return gaps, wsum
