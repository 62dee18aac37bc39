"""
Equality-constrained convex problems min f(x) s.t. Ax = b.

f is exposed only through a proximal oracle and a value oracle. Subgradients,
when needed, come from the prox relation g = (z − prox(γ, z))/γ, and the
conjugate prox comes from the Moreau identity.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh

from ..exceptions import ConstructionError, ParameterError, dimension_error
from ..linalg import as_matrix, as_vector


ProxOracle = Callable[[float, np.ndarray], np.ndarray]
ValueOracle = Callable[[np.ndarray], float]


def soft_threshold(z: np.ndarray, threshold: float) -> np.ndarray:
    """Componentwise shrinkage sign(z)·max(|z| − threshold, 0)."""
    return np.sign(z) * np.maximum(np.abs(z) - threshold, 0.0)


@dataclass(frozen=True)
class QuadraticTerm:
    """f(x) = ½xᵀQx + cᵀx with a cached eigendecomposition of Q."""

    Q: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @classmethod
    def from_data(cls, Q, c) -> "QuadraticTerm":
        Q = as_matrix(Q, "Q")
        n = Q.shape[0]
        if Q.shape != (n, n):
            raise dimension_error("Q", (n, n), Q.shape)
        c = as_vector(c, n, "c")
        if not np.allclose(Q, Q.T, rtol=1e-12, atol=1e-12):
            raise ConstructionError("Q must be symmetric", context={"n": n})
        Q = 0.5 * (Q + Q.T)
        eigenvalues, eigenvectors = eigh(Q)
        if eigenvalues[0] <= 0:
            raise ConstructionError(
                "Q must be positive definite",
                context={"min_eigenvalue": float(eigenvalues[0])}
            )
        return cls(Q=Q, c=c, eigenvalues=eigenvalues, eigenvectors=eigenvectors)

    @property
    def mu(self) -> float:
        return float(self.eigenvalues[0])

    def value(self, x: np.ndarray) -> float:
        return float(0.5 * x @ (self.Q @ x) + self.c @ x)

    def prox(self, gamma: float, z: np.ndarray) -> np.ndarray:
        # (Q + I/γ)y = z/γ − c in the eigenbasis of Q
        rhs = self.eigenvectors.T @ (z / gamma - self.c)
        return self.eigenvectors @ (rhs / (self.eigenvalues + 1.0 / gamma))

    def conjugate_value(self, u: np.ndarray) -> float:
        w = self.eigenvectors.T @ (u - self.c)
        return float(0.5 * np.sum(w * w / self.eigenvalues))


@dataclass(frozen=True)
class ConvexProblem:
    """A constrained convex problem given by oracles.

    Attributes:
        A: Constraint matrix (m×n)
        b: Right-hand side (m)
        prox: Oracle (γ, z) → argmin_y f(y) + (1/2γ)‖y − z‖²
        value: Oracle x → f(x)
        mu: Strong-convexity modulus of f (0 if merely convex)
        conjugate_value: Optional oracle u → f*(u)
        quadratic: Quadratic data when f is a quadratic, used by classical ALM
        name: Label for logs and reports
    """

    A: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    prox: ProxOracle = field(repr=False)
    value: ValueOracle = field(repr=False)
    mu: float = 0.0
    conjugate_value: Optional[ValueOracle] = field(default=None, repr=False)
    quadratic: Optional[QuadraticTerm] = field(default=None, repr=False)
    name: str = "problem"

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        b = as_vector(self.b, A.shape[0], "b")
        if not (self.mu >= 0 and np.isfinite(self.mu)):
            raise ParameterError("mu must be nonnegative", context={"mu": self.mu})
        A = A.copy()
        b = b.copy()
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.A @ x - self.b

    def residual_norm(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(self.A @ x - self.b))

    def lagrangian(self, x: np.ndarray, lam: np.ndarray) -> float:
        """f(x) + λᵀ(Ax − b)."""
        return self.value(x) + float(lam @ (self.A @ x - self.b))


@dataclass(frozen=True)
class SaddleCertificate:
    """A primal-dual pair (x*, λ*) of a ConvexProblem."""

    x_star: np.ndarray
    lambda_star: np.ndarray

    def feasibility(self, problem: ConvexProblem) -> float:
        return problem.residual_norm(self.x_star)

    def stationarity(self, problem: ConvexProblem, gamma: float = 1.0) -> float:
        """Distance of x* from prox(γ, x* − γAᵀλ*), zero iff 0 ∈ ∂f(x*) + Aᵀλ*."""
        shifted = self.x_star - gamma * (problem.A.T @ self.lambda_star)
        return float(np.linalg.norm(prox_f(problem, gamma, shifted) - self.x_star))

    def verify(self, problem: ConvexProblem, tol: float = 1e-10, gamma: float = 1.0) -> bool:
        scale = 1.0 + float(np.linalg.norm(self.x_star))
        return (
            self.feasibility(problem) <= tol * (1.0 + float(np.linalg.norm(problem.b)))
            and self.stationarity(problem, gamma) <= tol * scale
        )


def _check_gamma(gamma: float) -> float:
    if not (gamma > 0 and np.isfinite(gamma)):
        raise ParameterError("gamma must be positive", context={"gamma": gamma})
    return float(gamma)


def prox_f(problem: ConvexProblem, gamma: float, z) -> np.ndarray:
    """argmin_y f(y) + (1/2γ)‖y − z‖².

    Raises:
        ParameterError: gamma ≤ 0
        DimensionError: z does not have n entries
    """
    gamma = _check_gamma(gamma)
    z = as_vector(z, problem.n, "z")
    return problem.prox(gamma, z)


def prox_f_conjugate(problem: ConvexProblem, gamma: float, z) -> np.ndarray:
    """argmin_u f*(u) + (1/2γ)‖u − z‖², computed as z − γ·prox_f(1/γ, z/γ)."""
    gamma = _check_gamma(gamma)
    z = as_vector(z, problem.n, "z")
    return z - gamma * problem.prox(1.0 / gamma, z / gamma)
