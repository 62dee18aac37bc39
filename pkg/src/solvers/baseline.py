"""
One-step updates of the five primal-dual baselines.

Sign convention: the Lagrangian is f(x) + λᵀ(Ax − b), so multipliers ascend
along +(Ax − b). All x-updates are proximal steps prox_f(1/r, ·).
"""

from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..exceptions import ConfigurationError, ParameterError, UnsupportedProblemError, step_size_error
from ..linalg import RegularizedGramFactor, solve_regularized_gram, spectral_norm_sq
from ..problems.model import ConvexProblem
from .states import PrimalDualState


def _positive(name: str, value: float) -> float:
    if not (value > 0 and np.isfinite(value)):
        raise ParameterError(f"{name} must be positive", context={name: value})
    return float(value)


class QuadraticAlmSolver:
    """Direct solver for the coupled ALM subproblem of a quadratic f.

    Minimizes ½xᵀQx + cᵀx + λᵀ(Ax − b) + (β/2)‖Ax − b‖² through the
    normal equations (Q + βAᵀA)x = −c − Aᵀλ + βAᵀb, factored once.
    """

    def __init__(self, problem: ConvexProblem, beta: float):
        if problem.quadratic is None:
            raise UnsupportedProblemError(
                "Classical ALM needs a closed-form coupled subproblem (quadratic f)",
                context={"problem": problem.name}
            )
        self.beta = _positive("beta", beta)
        A = problem.A
        self._factor = cho_factor(problem.quadratic.Q + self.beta * (A.T @ A), lower=True)
        self._shift = -problem.quadratic.c + self.beta * (A.T @ problem.b)
        self._A = A

    def __call__(self, lam: np.ndarray) -> np.ndarray:
        return cho_solve(self._factor, self._shift - self._A.T @ lam)


def classical_alm_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    beta: float,
    inner_solver: Optional[QuadraticAlmSolver] = None,
) -> PrimalDualState:
    """x^{k+1} = argmin L_β(x, λ^k); λ^{k+1} = λ^k + β(Ax^{k+1} − b).

    Raises:
        UnsupportedProblemError: f is not quadratic and no inner solver is given
    """
    if inner_solver is None:
        inner_solver = QuadraticAlmSolver(problem, beta)
    elif not np.isclose(inner_solver.beta, beta):
        raise ConfigurationError(
            "Inner solver built for a different beta",
            context={"solver_beta": inner_solver.beta, "beta": beta}
        )
    x = inner_solver(state.lam)
    lam = state.lam + beta * (problem.A @ x - problem.b)
    return state.advance(x, lam)


def proximal_alm_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    beta: float,
    r: float,
    rho: Optional[float] = None,
) -> PrimalDualState:
    """Proximal ALM with the reduced (linearized) x-update.

    Args:
        rho: Precomputed ρ(AᵀA); estimated by power iteration when omitted

    Raises:
        StepSizeError: r ≤ βρ(AᵀA)
    """
    beta = _positive("beta", beta)
    r = _positive("r", r)
    if rho is None:
        rho = spectral_norm_sq(problem.A)
    if r <= beta * rho:
        raise step_size_error("r > βρ(AᵀA)", r=r, beta=beta, rho=rho)
    A, b = problem.A, problem.b
    grad = A.T @ (state.lam + beta * (A @ state.x - b))
    x = problem.prox(1.0 / r, state.x - grad / r)
    lam = state.lam + beta * (A @ x - b)
    return state.advance(x, lam)


def chambolle_pock_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    r: float,
    s: float,
    rho_factor: float = 1.0,
    rho: Optional[float] = None,
) -> PrimalDualState:
    """x^{k+1} = prox(1/r, x^k − Aᵀλ^k/r); λ^{k+1} = λ^k + (A(2x^{k+1} − x^k) − b)/s.

    Raises:
        StepSizeError: r·s ≤ rho_factor·ρ(AᵀA)
        ParameterError: rho_factor outside (0, 1]
    """
    r = _positive("r", r)
    s = _positive("s", s)
    if not 0 < rho_factor <= 1:
        raise ParameterError("rho_factor must lie in (0, 1]", context={"rho_factor": rho_factor})
    if rho is None:
        rho = spectral_norm_sq(problem.A)
    if r * s <= rho_factor * rho:
        raise step_size_error("rs > ρ(AᵀA)", r=r, s=s, rho_factor=rho_factor, rho=rho)
    A, b = problem.A, problem.b
    x = problem.prox(1.0 / r, state.x - (A.T @ state.lam) / r)
    lam = state.lam + (A @ (2.0 * x - state.x) - b) / s
    return state.advance(x, lam)


def _check_factor(problem: ConvexProblem, factor: RegularizedGramFactor, r: float, delta: float):
    if not factor.matches(problem.A, 1.0 / r, delta):
        raise ConfigurationError(
            "Gram factor does not match (1/r)AAᵀ + δI",
            context={"factor_beta": factor.beta, "factor_delta": factor.delta,
                     "r": r, "delta": delta}
        )


def balanced_alm_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    r: float,
    delta: float,
    factor: RegularizedGramFactor,
) -> PrimalDualState:
    """x^{k+1} = prox(1/r, x^k − Aᵀλ^k/r); λ^{k+1} = λ^k + ((1/r)AAᵀ + δI)⁻¹(A(2x^{k+1} − x^k) − b).

    Raises:
        ConfigurationError: factor not built for (1/r, δ)
    """
    _check_factor(problem, factor, r, delta)
    A, b = problem.A, problem.b
    x = problem.prox(1.0 / r, state.x - (A.T @ state.lam) / r)
    lam = state.lam + solve_regularized_gram(factor, A @ (2.0 * x - state.x) - b)
    return state.advance(x, lam)


def dual_primal_balanced_alm_step(
    problem: ConvexProblem,
    state: PrimalDualState,
    r: float,
    delta: float,
    factor: RegularizedGramFactor,
) -> PrimalDualState:
    """x^{k+1} = prox(1/r, x^k − Aᵀ(2λ^k − λ^{k−1})/r); λ^{k+1} = λ^k + ((1/r)AAᵀ + δI)⁻¹(Ax^{k+1} − b)."""
    _check_factor(problem, factor, r, delta)
    A, b = problem.A, problem.b
    lam_bar = 2.0 * state.lam - state.lam_prev
    x = problem.prox(1.0 / r, state.x - (A.T @ lam_bar) / r)
    lam = state.lam + solve_regularized_gram(factor, A @ x - b)
    return state.advance(x, lam)
