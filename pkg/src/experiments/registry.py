"""
Algorithm registry.

Maps every algorithm name accepted by the CLI (plus ``scheme:<order>``) to its
parameters, defaults and default iteration count, and builds the
(step, initial state, extractor) plan that the runner executes.
"""

import functools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.schema import SCHEME_PREFIX, ScheduleConfig, SolverParams, validate_algorithm_name
from ..diagnostics.trace import Trace
from ..exceptions import ScheduleError
from ..linalg import LiftedNormalSolver, factorize_regularized_gram, spectral_norm_sq
from ..problems import ConvexProblem, SaddleCertificate, quadratic_certificate
from ..solvers import (
    AccelState,
    DualAdmmState,
    LiftedAdmmState,
    OrderClass,
    PrimalDualState,
    QuadraticAlmSolver,
    Schedule,
    SchemeParams,
    UpdateOrder,
    accel_balanced_step,
    accel_dual_primal_step,
    accel_prox_admm_step,
    balanced_alm_step,
    chambolle_pock_step,
    classical_alm_step,
    classify_order,
    default_schedule,
    drs_balanced_config,
    drs_dual_primal_config,
    dual_primal_balanced_alm_step,
    h_factor,
    initial_scheme_state,
    lifted_admm_step,
    prox_admm_balanced_step,
    prox_admm_dual_primal_step,
    proximal_alm_step,
    recover_primal_negated,
    recover_primal_prox_admm_dual_primal,
    recover_primal_ratio_dual_admm,
    run_states,
    scheme_pairs,
    scheme_step,
    ratio_dual_admm_step,
    ratio_dual_primal_alm_step,
)
from ..solvers.schedules import require_valid
from ..utils.logger import get_logger, log_solver_event


logger = get_logger(__name__)

Pair = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class AlgorithmInfo:
    """Registry entry.

    Attributes:
        name: Registered name
        description: One-line summary for the ``algorithms`` listing
        parameters: Parameter names read from SolverParams
        default_iterations: K used when the config leaves iterations unset
        defaults: Values for unset parameters ("auto" ones are computed from the problem)
        schedule_check: Algorithm whose schedule conditions strict runs enforce, if any
    """

    name: str
    description: str
    parameters: Tuple[str, ...]
    default_iterations: int
    defaults: Mapping[str, Any] = field(default_factory=dict)
    uses_schedule: bool = False
    schedule_check: Optional[str] = None


ALGORITHM_REGISTRY: Dict[str, AlgorithmInfo] = {
    info.name: info for info in (
        AlgorithmInfo("classical_alm", "Classical ALM with an exact quadratic subproblem",
                      ("beta",), 200, {"beta": 1.0}),
        AlgorithmInfo("proximal_alm", "Proximal ALM, linearized x-step (r > βρ(AᵀA))",
                      ("beta", "r"), 3000, {"beta": 1.0, "r": "auto"}),
        AlgorithmInfo("chambolle_pock", "Chambolle-Pock primal-dual (rs > ρ(AᵀA))",
                      ("r", "s", "rho_factor"), 3000, {"r": 1.0, "s": "auto", "rho_factor": 1.0}),
        AlgorithmInfo("balanced_alm", "Balanced ALM",
                      ("r", "delta"), 1000, {"r": 1.0, "delta": 1.0}),
        AlgorithmInfo("dual_primal_alm", "Dual-primal balanced ALM",
                      ("r", "delta"), 1000, {"r": 1.0, "delta": 1.0}),
        AlgorithmInfo("lifted_admm", "ADMM on the primal lift x = y",
                      ("beta",), 2000, {"beta": 1.0}),
        AlgorithmInfo("drs_balanced", "DRS with the projection first (balanced ALM)",
                      ("r", "delta"), 1000, {"r": 1.0, "delta": 1.0}),
        AlgorithmInfo("drs_dual_primal", "DRS with the prox first (dual-primal ALM)",
                      ("r", "delta"), 1000, {"r": 1.0, "delta": 1.0}),
        AlgorithmInfo("prox_admm_balanced", "Proximal ADMM on the compact dual, balanced form",
                      ("beta1", "beta2"), 1000, {"beta1": 1.0, "beta2": 1.0}),
        AlgorithmInfo("prox_admm_dual_primal", "Proximal ADMM on the compact dual, dual-primal form",
                      ("beta1", "beta2"), 1000, {"beta1": 1.0, "beta2": 1.0}),
        AlgorithmInfo("accel_balanced", "Accelerated balanced ALM",
                      ("delta_prime",), 2000, {"delta_prime": 1.0},
                      uses_schedule=True, schedule_check="balanced"),
        AlgorithmInfo("accel_dual_primal", "Accelerated dual-primal balanced ALM",
                      ("delta_prime",), 2000, {"delta_prime": 1.0},
                      uses_schedule=True, schedule_check="dual_primal"),
        AlgorithmInfo("accel_prox_admm", "Accelerated proximal ADMM on the compact dual",
                      ("delta_prime",), 2000, {"delta_prime": 1.0},
                      uses_schedule=True, schedule_check="balanced"),
        AlgorithmInfo("ratio_dual_admm", "Dual ADMM form of the r^k/r^{k-1} extrapolation variant",
                      ("delta_prime",), 2000, {"delta_prime": 1.0}, uses_schedule=True),
        AlgorithmInfo("ratio_dual_primal_alm", "Dual-primal ALM extrapolating with r^k/r^{k-1}",
                      ("delta_prime",), 2000, {"delta_prime": 1.0}, uses_schedule=True),
    )
}

SCHEME_INFO = AlgorithmInfo(
    "scheme:<order>", "Five-block Gauss-Seidel scheme with the given update order",
    ("beta1", "beta2"), 1000, {"beta1": 1.0, "beta2": 1.0},
)

DEFAULT_ITERATIONS: Dict[str, int] = {
    name: info.default_iterations for name, info in ALGORITHM_REGISTRY.items()
}


def get_algorithm_info(name: str) -> AlgorithmInfo:
    """Registry entry of a name or scheme:<order>.

    Raises:
        ConfigurationError: unknown name or malformed order
    """
    name = validate_algorithm_name(name)
    if name.startswith(SCHEME_PREFIX):
        return SCHEME_INFO
    return ALGORITHM_REGISTRY[name]


def resolve_params(
    name: str,
    problem: ConvexProblem,
    params: Union[SolverParams, Mapping[str, float], None] = None,
) -> Dict[str, float]:
    """Merge explicit parameters over the algorithm defaults.

    Unset β₁, β₂ of the dual forms follow β₁ = 1/r, β₂ = δ when r or δ is given.
    """
    info = get_algorithm_info(name)
    if params is None:
        explicit: Dict[str, float] = {}
    elif isinstance(params, SolverParams):
        explicit = params.model_dump(exclude_none=True)
    else:
        explicit = {k: float(v) for k, v in params.items() if v is not None}

    resolved: Dict[str, Any] = dict(info.defaults)
    if "beta1" in info.parameters:
        if "beta1" not in explicit and "r" in explicit:
            resolved["beta1"] = 1.0 / explicit["r"]
        if "beta2" not in explicit and "delta" in explicit:
            resolved["beta2"] = explicit["delta"]
    resolved.update({k: v for k, v in explicit.items() if k in info.parameters})

    if resolved.get("r") == "auto" or resolved.get("s") == "auto":
        rho = spectral_norm_sq(problem.A)
        if resolved.get("r") == "auto":
            # proximal ALM needs r > βρ(AᵀA)
            resolved["r"] = 2.0 * resolved["beta"] * rho if rho > 0 else 1.0
        if resolved.get("s") == "auto":
            # Chambolle-Pock needs rs > ρ_factor·ρ(AᵀA)
            resolved["s"] = 2.0 * rho / resolved["r"] if rho > 0 else 1.0
    return {k: float(v) for k, v in resolved.items()}


def resolve_schedule(
    name: str,
    problem: ConvexProblem,
    params: Mapping[str, float],
    schedule: Union[Schedule, ScheduleConfig, None] = None,
) -> Optional[Schedule]:
    """Schedule for schedule-driven algorithms; r^k = μ(k+1)/3 when none is given.

    Raises:
        ScheduleError: no schedule given and the problem is not strongly convex
    """
    info = get_algorithm_info(name)
    if not info.uses_schedule:
        return None
    if isinstance(schedule, ScheduleConfig):
        return schedule.build(problem.mu)
    if schedule is not None:
        return schedule
    if not problem.mu > 0:
        raise ScheduleError(
            "acceleration requires strong convexity; configure a schedule explicitly",
            context={"algorithm": name, "problem": problem.name, "mu": problem.mu}
        )
    return default_schedule(problem.mu, delta_prime=params.get("delta_prime", 1.0))


@dataclass(frozen=True)
class AlgorithmPlan:
    """What the runner needs to execute one algorithm."""

    step: Callable[[Any], Any]
    init: Any
    extract_all: Callable[[Sequence[Any]], List[Pair]]
    lookahead: int = 0
    order_class: Optional[OrderClass] = None


def _pairs(states: Sequence[Any]) -> List[Pair]:
    return [s.pair() for s in states]


def _with_lams(xs: Sequence[np.ndarray], states: Sequence[Any]) -> List[Pair]:
    return [(x, s.lam) for x, s in zip(xs, states)]


def build_algorithm(
    name: str,
    problem: ConvexProblem,
    params: Mapping[str, float],
    schedule: Optional[Schedule] = None,
    x0=None,
    lam0=None,
) -> AlgorithmPlan:
    """Build the step function, initial state and (x, λ) extractor for ``name``."""
    name = validate_algorithm_name(name)
    x0 = np.zeros(problem.n) if x0 is None else np.asarray(x0, dtype=float)
    lam0 = np.zeros(problem.m) if lam0 is None else np.asarray(lam0, dtype=float)
    primal_dual = PrimalDualState.initial(x0, lam0)
    p = params

    if name.startswith(SCHEME_PREFIX):
        order = UpdateOrder.parse(name[len(SCHEME_PREFIX):])
        sp = SchemeParams(p["beta1"], p["beta2"])
        factor = factorize_regularized_gram(problem.A, sp.beta1, sp.beta2)
        return AlgorithmPlan(
            step=lambda s: scheme_step(order, s, sp, problem, factor),
            init=initial_scheme_state(problem, x0, lam0),
            extract_all=lambda states: scheme_pairs(states, order, sp, problem),
            order_class=classify_order(order),
        )
    if name == "classical_alm":
        inner = QuadraticAlmSolver(problem, p["beta"])
        return AlgorithmPlan(functools.partial(classical_alm_step, problem, beta=p["beta"],
                                               inner_solver=inner), primal_dual, _pairs)
    if name == "proximal_alm":
        rho = spectral_norm_sq(problem.A)
        return AlgorithmPlan(functools.partial(proximal_alm_step, problem, beta=p["beta"],
                                               r=p["r"], rho=rho), primal_dual, _pairs)
    if name == "chambolle_pock":
        rho = spectral_norm_sq(problem.A)
        return AlgorithmPlan(functools.partial(chambolle_pock_step, problem, r=p["r"], s=p["s"],
                                               rho_factor=p["rho_factor"], rho=rho),
                             primal_dual, _pairs)
    if name in ("balanced_alm", "dual_primal_alm"):
        factor = factorize_regularized_gram(problem.A, 1.0 / p["r"], p["delta"])
        stepper = balanced_alm_step if name == "balanced_alm" else dual_primal_balanced_alm_step
        return AlgorithmPlan(functools.partial(stepper, problem, r=p["r"], delta=p["delta"],
                                               factor=factor), primal_dual, _pairs)
    if name == "lifted_admm":
        solver = LiftedNormalSolver(problem.A)
        return AlgorithmPlan(functools.partial(lifted_admm_step, problem, beta=p["beta"],
                                               normal_solver=solver),
                             LiftedAdmmState.initial(x0, lam0, problem.A), _pairs)
    if name in ("drs_balanced", "drs_dual_primal"):
        config = drs_balanced_config if name == "drs_balanced" else drs_dual_primal_config
        splitting = config(problem, p["r"], p["delta"])
        return AlgorithmPlan(splitting.step, splitting.initial_state(x0, lam0),
                             splitting.extract, lookahead=1)
    if name in ("prox_admm_balanced", "prox_admm_dual_primal"):
        beta1, beta2 = p["beta1"], p["beta2"]
        factor = factorize_regularized_gram(problem.A, beta1, beta2)
        init = DualAdmmState.initial(x0, lam0, problem.A)
        if name == "prox_admm_balanced":
            return AlgorithmPlan(
                functools.partial(prox_admm_balanced_step, problem, beta1=beta1, beta2=beta2,
                                  factor=factor),
                init, lambda states: _with_lams(recover_primal_negated(states), states),
            )
        return AlgorithmPlan(
            functools.partial(prox_admm_dual_primal_step, problem, beta1=beta1, beta2=beta2,
                              factor=factor),
            init,
            lambda states: _with_lams(
                recover_primal_prox_admm_dual_primal(states, problem, beta1), states),
        )

    # schedule-driven methods
    factor_h = h_factor(problem, schedule)
    if name in ("accel_balanced", "accel_dual_primal"):
        stepper = accel_balanced_step if name == "accel_balanced" else accel_dual_primal_step
        return AlgorithmPlan(functools.partial(stepper, problem, schedule=schedule, factor_h=factor_h),
                             AccelState.initial(x0, lam0), _pairs)
    if name == "ratio_dual_primal_alm":
        return AlgorithmPlan(functools.partial(ratio_dual_primal_alm_step, problem, schedule=schedule,
                                               factor_h=factor_h), primal_dual, _pairs)
    init = DualAdmmState.initial(x0, lam0, problem.A)
    if name == "accel_prox_admm":
        return AlgorithmPlan(
            functools.partial(accel_prox_admm_step, problem, schedule=schedule, factor_h=factor_h),
            init, lambda states: _with_lams(recover_primal_negated(states), states),
        )
    # ratio_dual_admm
    return AlgorithmPlan(
        functools.partial(ratio_dual_admm_step, problem, schedule=schedule, factor_h=factor_h),
        init,
        lambda states: _with_lams(recover_primal_ratio_dual_admm(states, problem, schedule), states),
    )


@dataclass
class AlgorithmRun:
    """A finished run: trace rows k = 0..K plus the raw solver states."""

    name: str
    trace: Trace
    params: Dict[str, float]
    states: List[Any] = field(default_factory=list, repr=False)
    schedule: Optional[Schedule] = field(default=None, repr=False)
    order_class: Optional[OrderClass] = None

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1


def run_algorithm(
    name: str,
    problem: ConvexProblem,
    params: Union[SolverParams, Mapping[str, float], None] = None,
    iterations: Optional[int] = None,
    schedule: Union[Schedule, ScheduleConfig, None] = None,
    x0=None,
    lam0=None,
    strict: bool = True,
) -> AlgorithmRun:
    """Run a registered algorithm and record its trace.

    Args:
        strict: Enforce the schedule conditions of the accelerated methods over the horizon

    Raises:
        ConfigurationError: unknown algorithm
        ParameterError: invalid parameters or, when strict, an invalid schedule
        DivergenceError: an iterate became non-finite
    """
    name = validate_algorithm_name(name)
    info = get_algorithm_info(name)
    K = iterations if iterations is not None else info.default_iterations
    resolved = resolve_params(name, problem, params)
    sched = resolve_schedule(name, problem, resolved, schedule)
    if strict and info.schedule_check is not None:
        require_valid(sched, K, info.schedule_check)
    plan = build_algorithm(name, problem, resolved, sched, x0, lam0)
    log_solver_event(logger, "starting", name, {"iteration": K})
    trace, states = run_states(plan.step, problem, plan.init, K, plan.extract_all,
                               lookahead=plan.lookahead, algorithm=name)
    return AlgorithmRun(name=name, trace=trace, params=resolved, states=states,
                        schedule=sched, order_class=plan.order_class)


def reference_saddle(problem: ConvexProblem, iterations: int = 20000, tol: float = 1e-12) -> SaddleCertificate:
    """Reference (x*, λ*) for gap evaluation.

    Quadratic problems use the KKT oracle. Other problems use the limit of a
    balanced ALM run (r = δ = 1), stopped once successive iterates agree to tol.
    """
    if problem.quadratic is not None:
        return quadratic_certificate(problem)
    factor = factorize_regularized_gram(problem.A, 1.0, 1.0)
    state = PrimalDualState.initial(np.zeros(problem.n), np.zeros(problem.m))
    for _ in range(iterations):
        nxt = balanced_alm_step(problem, state, 1.0, 1.0, factor)
        change = np.linalg.norm(nxt.x - state.x) + np.linalg.norm(nxt.lam - state.lam)
        state = nxt
        if change <= tol:
            break
    log_solver_event(logger, "reference saddle from balanced ALM", "balanced_alm",
                     {"iteration": state.k, "residual": problem.residual_norm(state.x)})
    return SaddleCertificate(x_star=state.x, lambda_star=state.lam)
