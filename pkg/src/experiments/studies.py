"""
Multi-run studies: the 24-order sweep and gap-rate studies with bound checks.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from ..config.schema import ALGORITHM_ALIASES, ScheduleConfig, SolverParams
from ..diagnostics import BoundCheck, BoundKind, check_rate_bound, rate_fit
from ..exceptions import ConfigurationError, FitWindowError, ParameterError
from ..problems import ConvexProblem, SaddleCertificate
from ..solvers import Schedule, constant_schedule, enumerate_orders
from ..utils.logger import get_logger, log_solver_event
from .registry import reference_saddle, resolve_params, resolve_schedule, run_algorithm


logger = get_logger(__name__)

SWEEP_COLUMNS = ["order", "class", "x_error", "lambda_error", "residual"]

RATE_KINDS: Dict[str, BoundKind] = {
    "balanced_alm": BoundKind.BALANCED,
    "dual_primal_alm": BoundKind.DUAL_PRIMAL,
    "accel_balanced": BoundKind.ACCEL_BALANCED,
    "accel_dual_primal": BoundKind.ACCEL_DUAL_PRIMAL,
}


def _sweep_one(order, problem, params, iterations, reference: SaddleCertificate) -> Dict[str, object]:
    run = run_algorithm(f"scheme:{order}", problem, params=params, iterations=iterations)
    final = run.trace.final
    return {
        "order": str(order),
        "class": run.order_class.value,
        "x_error": float(np.linalg.norm(final.x - reference.x_star)),
        "lambda_error": float(np.linalg.norm(final.lam - reference.lambda_star)),
        "residual": final.primal_residual,
    }


def order_sweep(
    problem: ConvexProblem,
    iterations: int = 5000,
    params: Union[SolverParams, Mapping[str, float], None] = None,
    workers: int = 1,
    reference: Optional[SaddleCertificate] = None,
) -> pd.DataFrame:
    """Run all 24 canonical orders and report the distance to the saddle point.

    Orders run concurrently on ``workers`` threads. Rows come back in
    enumeration order regardless of completion order.

    Raises:
        ParameterError: workers < 1
        DivergenceError: some order produced a non-finite iterate
    """
    if workers < 1:
        raise ParameterError("workers must be at least 1", context={"workers": workers})
    if reference is None:
        reference = reference_saddle(problem)
    orders = enumerate_orders()
    rows: Dict[str, Dict[str, object]] = {}

    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_order = {
            executor.submit(_sweep_one, order, problem, params, iterations, reference): order
            for order in orders
        }
        for future in as_completed(future_to_order):
            order = future_to_order[future]
            rows[str(order)] = future.result()
            logger.debug(f"order {order} done", extra={"algorithm": f"scheme:{order}"})

    log_solver_event(logger, "order sweep finished", "scheme",
                     {"iteration": iterations, "orders": len(rows)})
    return pd.DataFrame([rows[str(order)] for order in orders], columns=SWEEP_COLUMNS)


def checkpoints(iterations: int, start: int = 50) -> List[int]:
    """50, 100, 200, 500, 1000, 2000, ... up to iterations, which is always included."""
    points = []
    decade = 10
    while decade <= iterations:
        points.extend(decade * m for m in (1, 2, 5) if start <= decade * m <= iterations)
        decade *= 10
    if iterations not in points:
        points.append(iterations)
    return sorted(points)


@dataclass
class RateStudy:
    """Rate study of one algorithm on one problem.

    Attributes:
        table: Checkpoint rows with columns K, gap, bound, bound_ok
        slope: Fitted log-log slope over [K/10, K], None when the gap vanished in that window
        check: Full per-K bound check at the reference saddle point
        spot_violations: Bound violations found at random reference pairs
    """

    algorithm: str
    problem: str
    kind: BoundKind
    table: pd.DataFrame
    slope: Optional[float]
    check: BoundCheck = field(repr=False)
    spot_violations: int = 0

    @property
    def bound_ok(self) -> bool:
        return self.check.ok and self.spot_violations == 0


def rate_schedule(
    algorithm: str,
    problem: ConvexProblem,
    params: Mapping[str, float],
    schedule: Union[Schedule, ScheduleConfig, None] = None,
) -> Schedule:
    """Schedule seen by the bound check; the plain methods use r^k ≡ r with δ′ = rδ."""
    if algorithm in ("balanced_alm", "dual_primal_alm"):
        r, delta = params["r"], params["delta"]
        return constant_schedule(r, delta_prime=r * delta, mu=problem.mu)
    return resolve_schedule(algorithm, problem, params, schedule)


def rate_study(
    problem: ConvexProblem,
    algorithm: str,
    iterations: int = 2000,
    params: Union[SolverParams, Mapping[str, float], None] = None,
    schedule: Union[Schedule, ScheduleConfig, None] = None,
    spot_checks: int = 0,
    seed: int = 0,
) -> RateStudy:
    """Ergodic gap at checkpoints, the matching bound, and the fitted rate.

    Args:
        spot_checks: Number of random reference pairs at which the bound is also checked

    Raises:
        ConfigurationError: no rate bound is registered for the algorithm
        ScheduleError: accelerated algorithm on a problem with μ = 0 and no schedule
    """
    algorithm = ALGORITHM_ALIASES.get(algorithm, algorithm)
    if algorithm not in RATE_KINDS:
        raise ConfigurationError(
            f"No rate bound registered for '{algorithm}'",
            context={"available": ", ".join(RATE_KINDS)}
        )
    kind = RATE_KINDS[algorithm]
    resolved = resolve_params(algorithm, problem, params)
    sched = rate_schedule(algorithm, problem, resolved, schedule)
    reference = reference_saddle(problem)

    # one extra step: the averages read x^{K+1}
    run = run_algorithm(algorithm, problem, params=resolved, iterations=iterations + 1,
                        schedule=sched if kind.weighted else None)
    check = check_rate_bound(problem, run.trace, kind, sched, reference.x_star,
                             reference.lambda_star, horizon=iterations)

    spot_violations = 0
    rng = np.random.default_rng(seed)
    for _ in range(spot_checks):
        x_ref = reference.x_star + rng.standard_normal(problem.n)
        lam_ref = reference.lambda_star + rng.standard_normal(problem.m)
        spot = check_rate_bound(problem, run.trace, kind, sched, x_ref, lam_ref, horizon=iterations)
        spot_violations += len(spot.violations)

    full = check.table
    try:
        slope = rate_fit(full[["K", "gap"]])
    except FitWindowError as e:
        logger.warning(f"Rate fit skipped: {e}", extra={"algorithm": algorithm})
        slope = None

    table = full.loc[full["K"].isin(checkpoints(iterations)), ["K", "gap", "bound", "bound_ok"]]
    log_solver_event(logger, "rate study finished", algorithm,
                     {"iteration": iterations, "slope": slope, "violations": len(check.violations)})
    return RateStudy(
        algorithm=algorithm, problem=problem.name, kind=kind,
        table=table.reset_index(drop=True), slope=slope, check=check,
        spot_violations=spot_violations,
    )
