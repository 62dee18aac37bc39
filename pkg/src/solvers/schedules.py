"""
Step-size schedules for the accelerated methods.

A schedule supplies r^k for k ≥ −1 (with r^{-1} := r⁰), the extrapolation
weight θ^k = r^k / r^{k+1}, the H-shift δ′ and the strong convexity modulus μ
it was built for. validate_schedule checks the growth condition
(r^k + μ)r^k ≥ (r^{k+1})² and, for the dual-primal method, monotonicity.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ..exceptions import ParameterError, ScheduleError


# Relative slack on the growth condition; the default schedule meets it with equality.
GROWTH_RTOL = 1e-12

ALGORITHMS = ("balanced", "dual_primal")


@dataclass(frozen=True)
class Schedule:
    """r^k sequence plus the constants of the accelerated updates.

    Attributes:
        rate: k ↦ r^k for k ≥ 0
        delta_prime: Shift δ′ of H = AAᵀ + δ′I
        mu: Strong convexity modulus the schedule assumes
        kind: Label used in logs and configs
    """

    rate: Callable[[int], float] = field(repr=False)
    delta_prime: float = 1.0
    mu: float = 0.0
    kind: str = "custom"

    def __post_init__(self):
        if not (self.delta_prime > 0 and np.isfinite(self.delta_prime)):
            raise ParameterError("delta_prime must be positive",
                                 context={"delta_prime": self.delta_prime})
        if not (self.mu >= 0 and np.isfinite(self.mu)):
            raise ParameterError("mu must be nonnegative", context={"mu": self.mu})

    def r(self, k: int) -> float:
        """r^k, with r^{-1} = r⁰.

        Raises:
            ScheduleError: r^k is not a positive finite number
        """
        value = float(self.rate(max(k, 0)))
        if not (value > 0 and np.isfinite(value)):
            raise ScheduleError("Schedule produced a nonpositive step", context={"k": k, "r": value})
        return value

    def theta(self, k: int) -> float:
        """θ^k = r^k / r^{k+1}; θ^{-1} = 1."""
        return self.r(k) / self.r(k + 1)

    def weight(self, k: int) -> float:
        return self.r(k)

    def values(self, horizon: int) -> np.ndarray:
        """r⁰..r^horizon."""
        return np.array([self.r(k) for k in range(horizon + 1)])


def default_schedule(mu: float, delta_prime: float = 1.0) -> Schedule:
    """r^k = μ(k+1)/3, so θ^k = (k+1)/(k+2).

    Raises:
        ScheduleError: mu is not positive
    """
    if not mu > 0:
        raise ScheduleError("acceleration requires strong convexity", context={"mu": mu})
    mu = float(mu)
    return Schedule(rate=lambda k: mu * (k + 1) / 3.0, delta_prime=delta_prime, mu=mu,
                    kind="mu_linear")


def constant_schedule(r: float, delta_prime: float = 1.0, mu: float = 0.0) -> Schedule:
    """r^k = r for every k; the accelerated methods then reduce to the plain ones with δ = δ′/r."""
    if not (r > 0 and np.isfinite(r)):
        raise ScheduleError("r must be positive", context={"r": r})
    r = float(r)
    return Schedule(rate=lambda k: r, delta_prime=delta_prime, mu=mu, kind="constant")


def linear_schedule(r0: float, slope: float, delta_prime: float = 1.0, mu: float = 0.0) -> Schedule:
    """r^k = r0 + slope·k."""
    if not (r0 > 0 and np.isfinite(r0)):
        raise ScheduleError("r0 must be positive", context={"r0": r0})
    if slope < 0:
        raise ScheduleError("slope must be nonnegative", context={"slope": slope})
    r0, slope = float(r0), float(slope)
    return Schedule(rate=lambda k: r0 + slope * k, delta_prime=delta_prime, mu=mu, kind="linear")


@dataclass(frozen=True)
class ScheduleViolation:
    k: int
    condition: str
    lhs: float
    rhs: float


@dataclass
class ScheduleReport:
    """Outcome of validate_schedule."""

    horizon: int
    algorithm: str
    violations: List[ScheduleViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[ScheduleViolation]:
        return self.violations[0] if self.violations else None

    def describe(self) -> str:
        first = self.first_violation
        if first is None:
            return f"schedule valid for {self.algorithm} over k=0..{self.horizon}"
        return (f"{first.condition} violated at k={first.k} "
                f"(lhs={first.lhs:.6g}, rhs={first.rhs:.6g})")


def validate_schedule(schedule: Schedule, horizon: int, for_algorithm: str = "balanced") -> ScheduleReport:
    """Check the growth condition (and monotonicity for dual_primal) over k = 0..horizon.

    Violations are collected, not raised.

    Raises:
        ParameterError: horizon < 1 or unknown algorithm
    """
    if horizon < 1:
        raise ParameterError("horizon must be at least 1", context={"horizon": horizon})
    if for_algorithm not in ALGORITHMS:
        raise ParameterError("for_algorithm must be 'balanced' or 'dual_primal'",
                             context={"for_algorithm": for_algorithm})
    report = ScheduleReport(horizon=horizon, algorithm=for_algorithm)
    r = schedule.values(horizon + 1)
    for k in range(horizon + 1):
        lhs = (r[k] + schedule.mu) * r[k]
        rhs = r[k + 1] ** 2
        if lhs < rhs * (1.0 - GROWTH_RTOL):
            report.violations.append(ScheduleViolation(k, "(r^k + mu) r^k >= (r^{k+1})^2", lhs, rhs))
        if for_algorithm == "dual_primal" and r[k] > r[k + 1]:
            report.violations.append(ScheduleViolation(k, "r^k <= r^{k+1}", r[k], r[k + 1]))
    return report


def require_valid(schedule: Schedule, horizon: int, for_algorithm: str) -> None:
    """Raise ScheduleError when validate_schedule reports a violation."""
    report = validate_schedule(schedule, horizon, for_algorithm)
    if not report.ok:
        first = report.first_violation
        raise ScheduleError(
            f"Schedule condition {first.condition} violated",
            context={"k": first.k, "lhs": first.lhs, "rhs": first.rhs, "kind": schedule.kind}
        )
