"""
Registered verification pairs.

Each pair runs two algorithms from the same (seeded) starting point and
compares their (x^k, λ^k) traces row by row. Positive pairs pass when every
row agrees to the tolerance. Negative controls pass when the rows separate
within the first few iterations.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from ..diagnostics import EquivalenceReport, Trace, iterate_equivalence
from ..exceptions import ConfigurationError
from ..problems import ConvexProblem
from ..solvers import Schedule, constant_schedule, linear_schedule
from ..solvers.scheme import (
    BALANCED_ORDER,
    BALANCED_VARIANT_ORDER,
    DUAL_PRIMAL_ORDER,
    DUAL_PRIMAL_VARIANT_ORDER,
)
from ..utils.logger import get_logger, log_solver_event
from .registry import run_algorithm


logger = get_logger(__name__)

PAIR_R = 2.0
PAIR_DELTA = 0.5
NEGATIVE_TOL = 1e-6
NEGATIVE_HORIZON = 3

Runner = Callable[[ConvexProblem, int, np.ndarray, np.ndarray], Trace]


def _runner(name: str, params: Optional[Mapping[str, float]] = None,
            schedule: Optional[Schedule] = None) -> Runner:
    def run(problem: ConvexProblem, iterations: int, x0: np.ndarray, lam0: np.ndarray) -> Trace:
        result = run_algorithm(name, problem, params=params, iterations=iterations,
                               schedule=schedule, x0=x0, lam0=lam0, strict=False)
        return result.trace
    return run


@dataclass(frozen=True)
class VerificationPair:
    """Two runs expected to coincide (or, for negative controls, to separate)."""

    name: str
    description: str
    left: Runner
    right: Runner
    tol: float = 1e-8
    expect_divergence: bool = False


@dataclass
class PairResult:
    """Outcome of one pair on one problem."""

    pair: str
    problem: str
    iterations: int
    report: EquivalenceReport
    expect_divergence: bool = False

    @property
    def passed(self) -> bool:
        if self.expect_divergence:
            first = self.report.first_divergence
            return first is not None and first <= NEGATIVE_HORIZON
        return self.report.ok

    def describe(self) -> str:
        if not self.expect_divergence:
            return self.report.describe()
        first = self.report.first_divergence
        if self.passed:
            return f"DIVERGENCE at k={first} as expected (tol {self.report.tol:g})"
        where = "never" if first is None else f"only at k={first}"
        return f"FAIL: iterates separate {where}, expected by k={NEGATIVE_HORIZON}"


_BALANCED = {"r": PAIR_R, "delta": PAIR_DELTA}
_SEPARATING = linear_schedule(1.0, 1.0)
# r^k = 1, δ′ = rδ = 1, so H = AAᵀ + I matches (1/r)AAᵀ + δI exactly
_CONSTANT = constant_schedule(1.0, delta_prime=1.0)

PAIRS: Dict[str, VerificationPair] = {
    pair.name: pair for pair in (
        VerificationPair("drs-balanced", "DRS (projection first) vs balanced ALM",
                         _runner("drs_balanced", _BALANCED), _runner("balanced_alm", _BALANCED)),
        VerificationPair("drs-dual-primal", "DRS (prox first) vs dual-primal balanced ALM",
                         _runner("drs_dual_primal", _BALANCED), _runner("dual_primal_alm", _BALANCED)),
        VerificationPair("scheme-balanced", f"scheme {BALANCED_ORDER} vs balanced ALM",
                         _runner(f"scheme:{BALANCED_ORDER}", _BALANCED), _runner("balanced_alm", _BALANCED)),
        VerificationPair("scheme-dual-primal", f"scheme {DUAL_PRIMAL_ORDER} vs dual-primal balanced ALM",
                         _runner(f"scheme:{DUAL_PRIMAL_ORDER}", _BALANCED), _runner("dual_primal_alm", _BALANCED)),
        VerificationPair("scheme-balanced-variant", f"scheme {BALANCED_VARIANT_ORDER} vs balanced ALM",
                         _runner(f"scheme:{BALANCED_VARIANT_ORDER}", _BALANCED), _runner("balanced_alm", _BALANCED)),
        VerificationPair("scheme-dual-primal-variant", f"scheme {DUAL_PRIMAL_VARIANT_ORDER} vs dual-primal balanced ALM",
                         _runner(f"scheme:{DUAL_PRIMAL_VARIANT_ORDER}", _BALANCED), _runner("dual_primal_alm", _BALANCED)),
        VerificationPair("dual-admm-balanced", "dual proximal ADMM (balanced form) vs balanced ALM",
                         _runner("prox_admm_balanced", _BALANCED), _runner("balanced_alm", _BALANCED)),
        VerificationPair("dual-admm-dual-primal", "dual proximal ADMM (dual-primal form) vs dual-primal ALM",
                         _runner("prox_admm_dual_primal", _BALANCED), _runner("dual_primal_alm", _BALANCED)),
        VerificationPair("accel-dual-admm", "accelerated dual proximal ADMM vs accelerated balanced ALM",
                         _runner("accel_prox_admm", schedule=_SEPARATING),
                         _runner("accel_balanced", schedule=_SEPARATING)),
        VerificationPair("ratio-variant-dual-form", "dual ADMM form vs primal form of the r^k/r^{k-1} variant",
                         _runner("ratio_dual_admm", schedule=_SEPARATING),
                         _runner("ratio_dual_primal_alm", schedule=_SEPARATING)),
        VerificationPair("constant-schedule-balanced",
                         "accelerated balanced ALM at constant r vs balanced ALM",
                         _runner("accel_balanced", schedule=_CONSTANT),
                         _runner("balanced_alm", {"r": 1.0, "delta": 1.0}), tol=1e-12),
        VerificationPair("constant-schedule-dual-primal",
                         "accelerated dual-primal ALM at constant r vs dual-primal ALM",
                         _runner("accel_dual_primal", schedule=_CONSTANT),
                         _runner("dual_primal_alm", {"r": 1.0, "delta": 1.0}), tol=1e-12),
        VerificationPair("ratio-variant-negative",
                         "r^k/r^{k-1} variant vs accelerated dual-primal ALM (must separate)",
                         _runner("ratio_dual_primal_alm", schedule=_SEPARATING),
                         _runner("accel_dual_primal", schedule=_SEPARATING),
                         tol=NEGATIVE_TOL, expect_divergence=True),
        VerificationPair("balanced-vs-dual-primal-negative",
                         "balanced ALM vs dual-primal balanced ALM (must separate)",
                         _runner("balanced_alm", _BALANCED), _runner("dual_primal_alm", _BALANCED),
                         tol=NEGATIVE_TOL, expect_divergence=True),
    )
}

# Alternate pair names accepted by verify.
PAIR_ALIASES = {
    "theorem1": "drs-balanced",
    "theorem2": "drs-dual-primal",
    "theorem3": "scheme-balanced",
    "theorem4": "scheme-dual-primal",
    "theorem5": "scheme-balanced-variant",
    "theorem6": "scheme-dual-primal-variant",
    "corollary1": "dual-admm-balanced",
    "corollary2": "dual-admm-dual-primal",
    "remark1": "accel-dual-admm",
    "remark2-dual": "ratio-variant-dual-form",
    "remark2-negative": "ratio-variant-negative",
}


def get_pair(name: str) -> VerificationPair:
    """Look up a registered pair by name or alias.

    Raises:
        ConfigurationError: unknown pair name
    """
    try:
        return PAIRS[PAIR_ALIASES.get(name, name)]
    except KeyError:
        raise ConfigurationError(
            f"Unknown verification pair '{name}'",
            context={"available": ", ".join(PAIRS)}
        ) from None


def random_start(problem: ConvexProblem, seed: int = 0):
    """Seeded Gaussian (x⁰, λ⁰)."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal(problem.n), rng.standard_normal(problem.m)


def verify_pair(
    name: str,
    problem: ConvexProblem,
    iterations: int = 200,
    tol: Optional[float] = None,
    seed: Optional[int] = 0,
) -> PairResult:
    """Run both sides of a pair and compare rows k = 0..iterations.

    Args:
        tol: Overrides the pair's tolerance
        seed: Seed of the random start; None starts both runs at zero
    """
    pair = get_pair(name)
    if seed is None:
        x0, lam0 = np.zeros(problem.n), np.zeros(problem.m)
    else:
        x0, lam0 = random_start(problem, seed)
    left = pair.left(problem, iterations, x0, lam0)
    right = pair.right(problem, iterations, x0, lam0)
    report = iterate_equivalence(left, right, tol=pair.tol if tol is None else tol, K=iterations)
    result = PairResult(pair=name, problem=problem.name, iterations=iterations,
                        report=report, expect_divergence=pair.expect_divergence)
    log_solver_event(logger, f"pair {name}: {'PASS' if result.passed else 'FAIL'}", name,
                     {"max_deviation": report.max_deviation})
    return result


def verify_all(problem: ConvexProblem, iterations: int = 200, seed: Optional[int] = 0) -> List[PairResult]:
    return [verify_pair(name, problem, iterations, seed=seed) for name in PAIRS]
