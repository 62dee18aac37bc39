"""
ADMM on the primal lift and Douglas-Rachford splitting on ℝⁿ × ℝᵐ.

The DRS side works with the lifted problem min f(x) s.t. Ax = σy, σy = b.
Its two resolvents are the projection P onto {Ax = σy} and the blockwise
resolvent F(x, y) = (prox_f(τ, x), b/σ). With τ = 1/r and σ² = rδ:

    A = P, B = F   reproduces balanced ALM
    A = F, B = P   reproduces dual-primal balanced ALM

DrsSplitting builds the matching initial state from (x⁰, λ⁰) and reads
(x^k, λ^k) back out of consecutive DRS states.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..exceptions import ParameterError
from ..linalg import (
    LiftedNormalSolver,
    RegularizedGramFactor,
    factorize_regularized_gram,
    solve_regularized_gram,
)
from ..problems.model import ConvexProblem
from .states import DrsState, LiftedAdmmState


Resolvent = Callable[[np.ndarray], np.ndarray]


def lifted_admm_step(
    problem: ConvexProblem,
    state: LiftedAdmmState,
    beta: float,
    normal_solver: Optional[LiftedNormalSolver] = None,
) -> LiftedAdmmState:
    """One ADMM pass over x, y, λ₁, λ₂ for min f(x) s.t. Ay = b, x = y."""
    if not beta > 0:
        raise ParameterError("beta must be positive", context={"beta": beta})
    if normal_solver is None:
        normal_solver = LiftedNormalSolver(problem.A)
    A, b = problem.A, problem.b
    x = problem.prox(1.0 / beta, state.y - state.lam2 / beta)
    q = (state.lam2 + beta * (A.T @ b) + beta * x - A.T @ state.lam1) / beta
    y = normal_solver.solve(q)
    lam1 = state.lam1 + beta * (A @ y - b)
    lam2 = state.lam2 + beta * (x - y)
    return LiftedAdmmState(x=x, y=y, lam1=lam1, lam2=lam2, k=state.k + 1)


def affine_resolvent_y(sigma: float, b: np.ndarray, y: Optional[np.ndarray] = None) -> np.ndarray:
    """Resolvent of the indicator of {σy = b}: the constant b/σ."""
    if not sigma > 0:
        raise ParameterError("sigma must be positive", context={"sigma": sigma})
    return np.asarray(b, dtype=float) / sigma


def affine_resolvent_z(A: np.ndarray, sigma: float, z: np.ndarray,
                       factor: Optional[RegularizedGramFactor] = None) -> np.ndarray:
    """Euclidean projection of z = (x, y) onto {Ax = σy}.

    With ρ = (AAᵀ + σ²I)⁻¹(Ax − σy) the result is (x − Aᵀρ, y + σρ).
    """
    if not sigma > 0:
        raise ParameterError("sigma must be positive", context={"sigma": sigma})
    A = np.asarray(A, dtype=float)
    n = A.shape[1]
    if factor is None:
        factor = factorize_regularized_gram(A, 1.0, sigma * sigma)
    x, y = z[:n], z[n:]
    rho = solve_regularized_gram(factor, A @ x - sigma * y)
    return np.concatenate([x - A.T @ rho, y + sigma * rho])


def drs_step(resolvent_a: Resolvent, resolvent_b: Resolvent, state: DrsState) -> DrsState:
    """w⁺ = R_A(2z − w) + w − z; z⁺ = R_B(w⁺)."""
    shadow = resolvent_a(2.0 * state.z - state.w)
    w = shadow + state.w - state.z
    z = resolvent_b(w)
    return DrsState(w=w, z=z, sigma=state.sigma, tau=state.tau, shadow=shadow,
                    n=state.n, k=state.k + 1)


@dataclass(frozen=True)
class DrsSplitting:
    """Resolvents, parameters and variable maps of one DRS role assignment.

    Attributes:
        problem: Problem being solved
        tau: Resolvent step 1/r
        sigma: Lift scaling √(rδ)
        resolvent_a: First resolvent applied in drs_step
        resolvent_b: Second resolvent applied in drs_step
        dual_primal: False for the balanced assignment (A = P), True for A = F
    """

    problem: ConvexProblem
    tau: float
    sigma: float
    resolvent_a: Resolvent
    resolvent_b: Resolvent
    dual_primal: bool

    def step(self, state: DrsState) -> DrsState:
        return drs_step(self.resolvent_a, self.resolvent_b, state)

    def initial_state(self, x0, lam0) -> DrsState:
        """DRS start whose extracted (x⁰, λ⁰) equal the given pair."""
        A, b = self.problem.A, self.problem.b
        tau, sigma = self.tau, self.sigma
        x0 = np.array(x0, dtype=float)
        lam0 = np.array(lam0, dtype=float)
        y0 = b / sigma
        z = np.concatenate([x0, y0])
        if self.dual_primal:
            w = np.concatenate([x0 + tau * (A.T @ lam0), y0 - sigma * tau * lam0])
        else:
            w = np.concatenate([x0 - tau * (A.T @ lam0),
                                sigma * tau * lam0 + (2.0 * b - A @ x0) / sigma])
        return DrsState(w=w, z=z, sigma=sigma, tau=tau, shadow=z.copy(),
                        n=self.problem.n, k=0)

    def primal(self, state: DrsState) -> np.ndarray:
        """x^k read from DRS state k."""
        n = self.problem.n
        return state.shadow[:n] if self.dual_primal else state.z[:n]

    def multiplier(self, next_state: DrsState) -> np.ndarray:
        """λ^k read from DRS state k+1."""
        y_tilde = next_state.w[self.problem.n:]
        centered = (y_tilde - self.problem.b / self.sigma) / (self.tau * self.sigma)
        return -centered if self.dual_primal else centered

    def extract(self, states: List[DrsState]) -> List[Tuple[np.ndarray, np.ndarray]]:
        """(x^k, λ^k) for k = 0..len(states) − 2."""
        return [
            (self.primal(states[k]), self.multiplier(states[k + 1]))
            for k in range(len(states) - 1)
        ]


def _drs_parameters(r: float, delta: float) -> Tuple[float, float]:
    if not (r > 0 and delta > 0):
        raise ParameterError("r and delta must be positive", context={"r": r, "delta": delta})
    tau = 1.0 / r
    sigma = float(np.sqrt(r * delta))
    return tau, sigma


def _resolvents(problem: ConvexProblem, tau: float, sigma: float) -> Tuple[Resolvent, Resolvent]:
    factor = factorize_regularized_gram(problem.A, 1.0, sigma * sigma)
    n = problem.n
    y_const = affine_resolvent_y(sigma, problem.b)

    def projection(v: np.ndarray) -> np.ndarray:
        return affine_resolvent_z(problem.A, sigma, v, factor)

    def blockwise(v: np.ndarray) -> np.ndarray:
        return np.concatenate([problem.prox(tau, v[:n]), y_const])

    return projection, blockwise


def drs_balanced_config(problem: ConvexProblem, r: float, delta: float) -> DrsSplitting:
    """DRS with A = projection onto {Ax = σy}, B = F; τ = 1/r, σ = √(rδ)."""
    tau, sigma = _drs_parameters(r, delta)
    projection, blockwise = _resolvents(problem, tau, sigma)
    return DrsSplitting(problem=problem, tau=tau, sigma=sigma,
                        resolvent_a=projection, resolvent_b=blockwise, dual_primal=False)


def drs_dual_primal_config(problem: ConvexProblem, r: float, delta: float) -> DrsSplitting:
    """DRS with the roles swapped: A = F, B = projection."""
    tau, sigma = _drs_parameters(r, delta)
    projection, blockwise = _resolvents(problem, tau, sigma)
    return DrsSplitting(problem=problem, tau=tau, sigma=sigma,
                        resolvent_a=blockwise, resolvent_b=projection, dual_primal=True)
