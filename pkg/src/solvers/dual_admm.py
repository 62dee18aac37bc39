"""
Proximal ADMM on the compact dual

    min f*(u) + λᵀb   s.t.   Aᵀλ + u = 0

with multiplier x̄ of the constraint. Every u-update is a conjugate prox
evaluated through prox_f_conjugate, so problems only need a prox of f.

Primal recovery:
    balanced and accelerated forms   x^k = −x̄^k
    dual-primal form                 x^{k+1} = −x̄^k − β₁u^{k+1} − β₁Aᵀλ^k
    ratio-extrapolated form          x^{k+1} = −x̄^{k+1} − (1/r^k)Aᵀ(λ^k − λ^{k+1})
"""

from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import ConfigurationError, TraceError
from ..linalg import RegularizedGramFactor, factorize_regularized_gram, solve_regularized_gram
from ..problems.model import ConvexProblem, prox_f_conjugate
from .schedules import Schedule
from .states import DualAdmmState, PrimalDualState


def _check_factor(problem: ConvexProblem, factor: RegularizedGramFactor, beta1: float, beta2: float):
    if not factor.matches(problem.A, beta1, beta2):
        raise ConfigurationError(
            "Gram factor does not match β₁AAᵀ + β₂I",
            context={"factor_beta": factor.beta, "factor_delta": factor.delta,
                     "beta1": beta1, "beta2": beta2}
        )


def _h_factor(problem: ConvexProblem, schedule: Schedule,
              factor_h: Optional[RegularizedGramFactor]) -> RegularizedGramFactor:
    if factor_h is None:
        return factorize_regularized_gram(problem.A, 1.0, schedule.delta_prime)
    if not factor_h.matches(problem.A, 1.0, schedule.delta_prime):
        raise ConfigurationError(
            "H factor does not match AAᵀ + δ′I",
            context={"factor_delta": factor_h.delta, "delta_prime": schedule.delta_prime}
        )
    return factor_h


def prox_admm_balanced_step(
    problem: ConvexProblem,
    state: DualAdmmState,
    beta1: float,
    beta2: float,
    factor: RegularizedGramFactor,
) -> DualAdmmState:
    """u, then x̄ with λ^k, then λ from
    (β₁AAᵀ + β₂I)(λ^{k+1} − λ^k) = −b − Ax̄^{k+1} − β₁Au^{k+1} − β₁AAᵀλ^k.
    """
    _check_factor(problem, factor, beta1, beta2)
    A, b = problem.A, problem.b
    Atl = A.T @ state.lam
    u = prox_f_conjugate(problem, 1.0 / beta1, -Atl - state.xbar / beta1)
    xbar = state.xbar + beta1 * (u + Atl)
    rhs = -b - A @ xbar - beta1 * (A @ u) - beta1 * (A @ Atl)
    lam = state.lam + solve_regularized_gram(factor, rhs)
    return DualAdmmState(u=u, lam=lam, xbar=xbar, k=state.k + 1)


def prox_admm_dual_primal_step(
    problem: ConvexProblem,
    state: DualAdmmState,
    beta1: float,
    beta2: float,
    factor: RegularizedGramFactor,
) -> DualAdmmState:
    """u, then λ using x̄^k, then x̄^{k+1} = x̄^k + β₁(u^{k+1} + Aᵀλ^{k+1})."""
    _check_factor(problem, factor, beta1, beta2)
    A, b = problem.A, problem.b
    Atl = A.T @ state.lam
    u = prox_f_conjugate(problem, 1.0 / beta1, -Atl - state.xbar / beta1)
    rhs = -b - A @ state.xbar - beta1 * (A @ u) - beta1 * (A @ Atl)
    lam = state.lam + solve_regularized_gram(factor, rhs)
    xbar = state.xbar + beta1 * (u + A.T @ lam)
    return DualAdmmState(u=u, lam=lam, xbar=xbar, k=state.k + 1)


def accel_prox_admm_step(
    problem: ConvexProblem,
    state: DualAdmmState,
    schedule: Schedule,
    factor_h: Optional[RegularizedGramFactor] = None,
) -> DualAdmmState:
    """Accelerated dual form: steps 1/r^k for u and x̄, 1/r^{k+1} and δ^k = δ′/r^{k+1} for λ."""
    factor_h = _h_factor(problem, schedule, factor_h)
    k = state.k
    r_k, r_next = schedule.r(k), schedule.r(k + 1)
    A, b = problem.A, problem.b
    Atl = A.T @ state.lam
    u = prox_f_conjugate(problem, r_k, -Atl - r_k * state.xbar)
    xbar = state.xbar + (u + Atl) / r_k
    rhs = -b - A @ xbar - (A @ u + A @ Atl) / r_next
    lam = state.lam + r_next * solve_regularized_gram(factor_h, rhs)
    return DualAdmmState(u=u, lam=lam, xbar=xbar, k=k + 1)


def ratio_dual_primal_alm_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    schedule: Schedule,
    factor_h: Optional[RegularizedGramFactor] = None,
) -> PrimalDualState:
    """Dual-primal method extrapolating with r^k/r^{k−1} instead of θ^{k−1} = r^{k−1}/r^k.

    x^{k+1} = prox(1/r^k, x^k − Aᵀ(λ^k + (r^k/r^{k−1})(λ^k − λ^{k−1}))/r^k);
    λ^{k+1} = λ^k + r^k H⁻¹(Ax^{k+1} − b).
    """
    factor_h = _h_factor(problem, schedule, factor_h)
    k = state.k
    r_k = schedule.r(k)
    A, b = problem.A, problem.b
    lam_bar = state.lam + (r_k / schedule.r(k - 1)) * (state.lam - state.lam_prev)
    x = problem.prox(1.0 / r_k, state.x - (A.T @ lam_bar) / r_k)
    lam = state.lam + r_k * solve_regularized_gram(factor_h, A @ x - b)
    return state.advance(x, lam)


def ratio_dual_admm_step(
    problem: ConvexProblem,
    state: DualAdmmState,
    schedule: Schedule,
    factor_h: Optional[RegularizedGramFactor] = None,
) -> DualAdmmState:
    """Dual proximal ADMM form of ratio_dual_primal_alm_step: u, then λ with x̄^k, then x̄ with λ^{k+1}.

    All three updates use r^k, and the λ-system is ((1/r^k)AAᵀ + δ′/r^k I).
    """
    factor_h = _h_factor(problem, schedule, factor_h)
    k = state.k
    r_k = schedule.r(k)
    A, b = problem.A, problem.b
    Atl = A.T @ state.lam
    u = prox_f_conjugate(problem, r_k, -Atl - r_k * state.xbar)
    rhs = -b - A @ state.xbar - (A @ u + A @ Atl) / r_k
    lam = state.lam + r_k * solve_regularized_gram(factor_h, rhs)
    xbar = state.xbar + (u + A.T @ lam) / r_k
    return DualAdmmState(u=u, lam=lam, xbar=xbar, k=k + 1)


def _require_states(states: Sequence[DualAdmmState]) -> None:
    if not states:
        raise TraceError("Recovery needs at least the initial state")


def recover_primal_negated(states: Sequence[DualAdmmState]) -> List[np.ndarray]:
    """x^k = −x̄^k."""
    _require_states(states)
    return [-s.xbar for s in states]


def recover_primal_prox_admm_dual_primal(
    states: Sequence[DualAdmmState], problem: ConvexProblem, beta1: float
) -> List[np.ndarray]:
    """x⁰ = −x̄⁰ and x^{k+1} = −x̄^k − β₁u^{k+1} − β₁Aᵀλ^k."""
    _require_states(states)
    A = problem.A
    xs = [-states[0].xbar]
    for prev, cur in zip(states, states[1:]):
        xs.append(-prev.xbar - beta1 * cur.u - beta1 * (A.T @ prev.lam))
    return xs


def recover_primal_ratio_dual_admm(
    states: Sequence[DualAdmmState], problem: ConvexProblem, schedule: Schedule
) -> List[np.ndarray]:
    """x⁰ = −x̄⁰ and x^{k+1} = −x̄^{k+1} − (1/r^k)Aᵀ(λ^k − λ^{k+1})."""
    _require_states(states)
    A = problem.A
    xs = [-states[0].xbar]
    for k, (prev, cur) in enumerate(zip(states, states[1:])):
        xs.append(-cur.xbar - (A.T @ (prev.lam - cur.lam)) / schedule.r(k))
    return xs
