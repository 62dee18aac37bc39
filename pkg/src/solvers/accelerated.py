"""
Accelerated balanced ALM and accelerated dual-primal balanced ALM.

Both use one factorization of H = AAᵀ + δ′I. With δ^k = δ′/r^{k+1}
(balanced) or δ^k = δ′/r^k (dual-primal) the multiplier systems reduce to

    ((1/r^{k+1})AAᵀ + δ^k I)⁻¹ = r^{k+1} H⁻¹
    ((1/r^k)AAᵀ + δ^k I)⁻¹     = r^k H⁻¹
"""

import functools
from typing import Optional

import numpy as np

from ..diagnostics.trace import Trace
from ..exceptions import ConfigurationError, ParameterError
from ..linalg import RegularizedGramFactor, factorize_regularized_gram, solve_regularized_gram
from ..problems.model import ConvexProblem
from ..utils.logger import get_logger, log_solver_event
from .runner import run
from .schedules import ALGORITHMS, Schedule, require_valid
from .states import AccelState


logger = get_logger(__name__)


def h_factor(problem: ConvexProblem, schedule: Schedule) -> RegularizedGramFactor:
    """Factor of H = AAᵀ + δ′I for the schedule's δ′."""
    return factorize_regularized_gram(problem.A, 1.0, schedule.delta_prime)


def _check_h_factor(problem: ConvexProblem, factor_h: RegularizedGramFactor, schedule: Schedule):
    if not factor_h.matches(problem.A, 1.0, schedule.delta_prime):
        raise ConfigurationError(
            "H factor does not match AAᵀ + δ′I",
            context={"factor_beta": factor_h.beta, "factor_delta": factor_h.delta,
                     "delta_prime": schedule.delta_prime}
        )


def accel_balanced_step(
    problem: ConvexProblem,
    state: AccelState,
    schedule: Schedule,
    factor_h: RegularizedGramFactor,
) -> AccelState:
    """x^{k+1} = prox(1/r^k, x^k − Aᵀλ^k/r^k); x̃ = x^{k+1} + θ^k(x^{k+1} − x^k);
    λ^{k+1} = λ^k + r^{k+1}H⁻¹(Ax̃ − b).

    With r^k ≡ r this is balanced ALM with δ = δ′/r.
    """
    _check_h_factor(problem, factor_h, schedule)
    k = state.k
    r_k, r_next = schedule.r(k), schedule.r(k + 1)
    A, b = problem.A, problem.b
    x = problem.prox(1.0 / r_k, state.x - (A.T @ state.lam) / r_k)
    x_tilde = x + (r_k / r_next) * (x - state.x)
    lam = state.lam + r_next * solve_regularized_gram(factor_h, A @ x_tilde - b)
    return AccelState(x=x, x_prev=state.x, lam=lam, lam_prev=state.lam,
                      x_tilde=x_tilde, lam_tilde=None, k=k + 1)


def accel_dual_primal_step(
    problem: ConvexProblem,
    state: AccelState,
    schedule: Schedule,
    factor_h: RegularizedGramFactor,
) -> AccelState:
    """λ̃^k = λ^k + θ^{k−1}(λ^k − λ^{k−1}); x^{k+1} = prox(1/r^k, x^k − Aᵀλ̃^k/r^k);
    λ^{k+1} = λ^k + r^k H⁻¹(Ax^{k+1} − b).

    With r^k ≡ r this is dual-primal balanced ALM with δ = δ′/r.
    """
    _check_h_factor(problem, factor_h, schedule)
    k = state.k
    r_k = schedule.r(k)
    A, b = problem.A, problem.b
    lam_tilde = state.lam + schedule.theta(k - 1) * (state.lam - state.lam_prev)
    x = problem.prox(1.0 / r_k, state.x - (A.T @ lam_tilde) / r_k)
    lam = state.lam + r_k * solve_regularized_gram(factor_h, A @ x - b)
    return AccelState(x=x, x_prev=state.x, lam=lam, lam_prev=state.lam,
                      x_tilde=None, lam_tilde=lam_tilde, k=k + 1)


def run_accelerated(
    problem: ConvexProblem,
    algorithm: str,
    schedule: Schedule,
    iterations: int,
    x0=None,
    lam0=None,
    strict: bool = True,
    factor_h: Optional[RegularizedGramFactor] = None,
) -> Trace:
    """Run Algorithm 'balanced' or 'dual_primal' for ``iterations`` steps.

    Args:
        strict: Enforce the growth (and monotonicity) conditions over the horizon

    Raises:
        ScheduleError: strict and the schedule violates its conditions
        DivergenceError: an iterate became non-finite
    """
    if algorithm not in ALGORITHMS:
        raise ParameterError("algorithm must be 'balanced' or 'dual_primal'",
                             context={"algorithm": algorithm})
    if strict:
        require_valid(schedule, iterations, algorithm)
    if factor_h is None:
        factor_h = h_factor(problem, schedule)
    x0 = np.zeros(problem.n) if x0 is None else x0
    lam0 = np.zeros(problem.m) if lam0 is None else lam0
    stepper = accel_balanced_step if algorithm == "balanced" else accel_dual_primal_step
    label = f"accel_{algorithm}"
    log_solver_event(logger, "starting", label,
                     {"schedule": schedule.kind, "delta_prime": schedule.delta_prime})
    return run(
        functools.partial(_apply, stepper, problem, schedule, factor_h),
        problem, AccelState.initial(x0, lam0), iterations, algorithm=label,
    )


def _apply(stepper, problem, schedule, factor_h, state):
    return stepper(problem, state, schedule, factor_h)
