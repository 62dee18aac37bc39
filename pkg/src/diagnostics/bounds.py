"""
Ergodic gap bounds of the balanced and dual-primal methods.

Each bound has the form

    W_K · gap(x̂^K, λ̂^K; x, λ) ≤ C

where W_K is K+1 for the constant-parameter methods and Σ_{k≤K} r^k for the
accelerated ones, and C depends only on the initialization and the reference
pair. ‖·‖_H uses H = AAᵀ + δ′I; for constant parameters δ′ = rδ.

History: x^{-1} = x⁰ everywhere. The dual-primal methods use their own
λ^{-1} = λ⁰. The balanced methods use the back-extrapolated
λ^{-1} = λ⁰ − r⁰H⁻¹(Ax⁰ − b), the value for which the multiplier recurrence
also holds at k = −1.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Protocol

import numpy as np
import pandas as pd

from ..exceptions import ParameterError
from ..linalg import factorize_regularized_gram, h_norm_sq, solve_regularized_gram
from .gap import ErgodicSpec, ergodic_gap_series


class RateSchedule(Protocol):
    delta_prime: float

    def r(self, k: int) -> float: ...


class BoundKind(str, Enum):
    BALANCED = "balanced"
    DUAL_PRIMAL = "dual_primal"
    ACCEL_BALANCED = "accel_balanced"
    ACCEL_DUAL_PRIMAL = "accel_dual_primal"

    @property
    def weighted(self) -> bool:
        return self in (BoundKind.ACCEL_BALANCED, BoundKind.ACCEL_DUAL_PRIMAL)

    @property
    def dual_primal(self) -> bool:
        return self in (BoundKind.DUAL_PRIMAL, BoundKind.ACCEL_DUAL_PRIMAL)

    def ergodic_spec(self, schedule: Optional[RateSchedule] = None) -> ErgodicSpec:
        weight = schedule.r if (self.weighted and schedule is not None) else None
        if self.dual_primal:
            return ErgodicSpec.dual_primal(weight)
        return ErgodicSpec.balanced(weight)


def back_extrapolated_multiplier(problem, x0, lam0, r0: float, delta_prime: float) -> np.ndarray:
    """λ⁰ − r⁰H⁻¹(Ax⁰ − b)."""
    factor = factorize_regularized_gram(problem.A, 1.0, delta_prime)
    return np.asarray(lam0, dtype=float) - r0 * solve_regularized_gram(factor, problem.residual(x0))


def _cross(A, lam_diff, x_diff) -> float:
    return float(lam_diff @ (A @ x_diff))


def balanced_bound_constant(A, x0, x_prev, lam_prev, x_ref, lam_ref, r: float, delta_prime: float) -> float:
    """(r/2)(‖x⁰−x‖² + ‖x^{-1}−x⁰‖²) + (1/2r)‖λ^{-1}−λ‖²_H + (λ^{-1}−λ)ᵀA(x⁰−x^{-1})."""
    dx = x0 - x_ref
    dh = x_prev - x0
    dl = lam_prev - lam_ref
    return (
        0.5 * r * (dx @ dx + dh @ dh)
        + h_norm_sq(A, delta_prime, dl) / (2.0 * r)
        + _cross(A, dl, x0 - x_prev)
    )


def dual_primal_bound_constant(A, x0, lam0, lam_prev, x_ref, lam_ref, r: float, delta_prime: float) -> float:
    """(r/2)‖x⁰−x‖² + (1/2r)(‖λ⁰−λ‖²_H + ‖λ^{-1}−λ⁰‖²_H) − (λ^{-1}−λ⁰)ᵀA(x⁰−x)."""
    dx = x0 - x_ref
    return (
        0.5 * r * (dx @ dx)
        + (h_norm_sq(A, delta_prime, lam0 - lam_ref) + h_norm_sq(A, delta_prime, lam_prev - lam0))
        / (2.0 * r)
        - _cross(A, lam_prev - lam0, dx)
    )


def accel_balanced_bound_constant(A, x0, x_prev, lam_prev, x_ref, lam_ref,
                                  r0: float, r_prev: float, delta_prime: float) -> float:
    """(r⁰)²/2‖x⁰−x‖² + (r^{-1})²/2‖x^{-1}−x⁰‖² + ½‖λ^{-1}−λ‖²_H + r^{-1}(λ^{-1}−λ)ᵀA(x⁰−x^{-1})."""
    dx = x0 - x_ref
    dh = x_prev - x0
    dl = lam_prev - lam_ref
    return (
        0.5 * r0 * r0 * (dx @ dx)
        + 0.5 * r_prev * r_prev * (dh @ dh)
        + 0.5 * h_norm_sq(A, delta_prime, dl)
        + r_prev * _cross(A, dl, x0 - x_prev)
    )


def accel_dual_primal_bound_constant(A, x0, lam0, lam_prev, x_ref, lam_ref,
                                     r0: float, r_prev: float, delta_prime: float) -> float:
    """(r⁰)²/2‖x⁰−x‖² + ½‖λ⁰−λ‖²_H + ½‖λ^{-1}−λ⁰‖²_H − r^{-1}(λ^{-1}−λ⁰)ᵀA(x⁰−x)."""
    dx = x0 - x_ref
    return (
        0.5 * r0 * r0 * (dx @ dx)
        + 0.5 * h_norm_sq(A, delta_prime, lam0 - lam_ref)
        + 0.5 * h_norm_sq(A, delta_prime, lam_prev - lam0)
        - r_prev * _cross(A, lam_prev - lam0, dx)
    )


def bound_constant(
    problem,
    kind: BoundKind,
    schedule: RateSchedule,
    x0,
    lam0,
    x_ref,
    lam_ref,
    x_prev=None,
    lam_prev=None,
) -> float:
    """Right-hand side C of the bound for ``kind``.

    x_prev and lam_prev default to the history conventions in the module docstring.
    """
    kind = BoundKind(kind)
    A = problem.A
    x0 = np.asarray(x0, dtype=float)
    lam0 = np.asarray(lam0, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    lam_ref = np.asarray(lam_ref, dtype=float)
    x_prev = x0 if x_prev is None else np.asarray(x_prev, dtype=float)
    r0, r_prev, dp = schedule.r(0), schedule.r(-1), schedule.delta_prime
    if lam_prev is None:
        if kind.dual_primal:
            lam_prev = lam0
        else:
            lam_prev = back_extrapolated_multiplier(problem, x0, lam0, r0, dp)
    lam_prev = np.asarray(lam_prev, dtype=float)

    if kind is BoundKind.BALANCED:
        return balanced_bound_constant(A, x0, x_prev, lam_prev, x_ref, lam_ref, r0, dp)
    if kind is BoundKind.DUAL_PRIMAL:
        return dual_primal_bound_constant(A, x0, lam0, lam_prev, x_ref, lam_ref, r0, dp)
    if kind is BoundKind.ACCEL_BALANCED:
        return accel_balanced_bound_constant(A, x0, x_prev, lam_prev, x_ref, lam_ref, r0, r_prev, dp)
    return accel_dual_primal_bound_constant(A, x0, lam0, lam_prev, x_ref, lam_ref, r0, r_prev, dp)


@dataclass
class BoundCheck:
    """Per-K bound table plus the violating K values.

    The table has columns K, gap, weight_sum, lhs (= weight_sum·gap), bound (= C / weight_sum)
    and bound_ok.
    """

    kind: BoundKind
    constant: float
    table: pd.DataFrame = field(repr=False)
    violations: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_rate_bound(
    problem,
    trace,
    kind: BoundKind,
    schedule: RateSchedule,
    x_ref,
    lam_ref,
    horizon: Optional[int] = None,
    x_prev=None,
    lam_prev=None,
    tol: float = 1e-9,
    ergodic: Optional[ErgodicSpec] = None,
) -> BoundCheck:
    """Evaluate W_K·gap ≤ C for K = 0..horizon.

    Args:
        trace: Trace (or (xs, lams)) starting at the initial point
        schedule: Anything with r(k) and delta_prime; a constant one for the plain methods
        ergodic: Averaging override, used to show that a wrong index offset breaks the bound
        tol: Relative slack, lhs ≤ C + tol·(1 + |C|)
    """
    if tol < 0:
        raise ParameterError("tol must be nonnegative", context={"tol": tol})
    kind = BoundKind(kind)
    spec = ergodic if ergodic is not None else kind.ergodic_spec(schedule)
    xs, lams = (trace.xs, trace.lams) if hasattr(trace, "xs") else trace
    gaps, wsum = ergodic_gap_series(problem, (xs, lams), spec, x_ref, lam_ref, horizon)
    constant = bound_constant(problem, kind, schedule, xs[0], lams[0], x_ref, lam_ref,
                              x_prev=x_prev, lam_prev=lam_prev)
    lhs = wsum * gaps
    ok = lhs <= constant + tol * (1.0 + abs(constant))
    table = pd.DataFrame({
        "K": np.arange(len(gaps)),
        "gap": gaps,
        "weight_sum": wsum,
        "lhs": lhs,
        "bound": constant / wsum,
        "bound_ok": ok,
    })
    violations = [int(K) for K in table.loc[~table["bound_ok"], "K"]]
    return BoundCheck(kind=kind, constant=float(constant), table=table, violations=violations)
