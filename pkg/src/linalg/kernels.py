"""Dense kernels: regularized Gram factorizations, Sherman-Morrison solves, power iteration.

All factors are immutable once built and may be shared between concurrent runs.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, norm

from ..exceptions import InputError, ParameterError, dimension_error


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Return A as a finite 2-D float array."""
    arr = np.atleast_2d(np.asarray(A, dtype=float))
    if arr.ndim != 2:
        raise InputError(f"'{name}' must be a matrix", context={"ndim": arr.ndim})
    if not np.all(np.isfinite(arr)):
        raise InputError(f"Non-finite entries in '{name}'", context={"field": name})
    return arr


def as_vector(v, size: Optional[int] = None, name: str = "v") -> np.ndarray:
    """Return v as a finite 1-D float array, optionally checking its length."""
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if size is not None and arr.shape[0] != size:
        raise dimension_error(name, (size,), arr.shape)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"Non-finite entries in '{name}'", context={"field": name})
    return arr


@dataclass(frozen=True)
class RegularizedGramFactor:
    """Cholesky factor of beta·AAᵀ + delta·I.

    Attributes:
        beta: Gram weight
        delta: Diagonal shift
        chol: Lower-triangular factor L with L·Lᵀ = beta·AAᵀ + delta·I
        A_ref: The matrix the factor was built from
    """

    beta: float
    delta: float
    chol: np.ndarray = field(repr=False)
    A_ref: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.chol.shape[0]

    def matrix(self) -> np.ndarray:
        """Rebuild beta·AAᵀ + delta·I."""
        return self.beta * (self.A_ref @ self.A_ref.T) + self.delta * np.eye(self.size)

    def solve(self, rhs) -> np.ndarray:
        return solve_regularized_gram(self, rhs)

    def matches(self, A: np.ndarray, beta: float, delta: float, rtol: float = 1e-12) -> bool:
        """Whether this factor was built for (A, beta, delta)."""
        same_a = A is self.A_ref or (
            A.shape == self.A_ref.shape and np.array_equal(A, self.A_ref)
        )
        return (
            same_a
            and np.isclose(self.beta, beta, rtol=rtol, atol=0.0)
            and np.isclose(self.delta, delta, rtol=rtol, atol=0.0)
        )


def factorize_regularized_gram(A, beta: float, delta: float) -> RegularizedGramFactor:
    """Factor beta·AAᵀ + delta·I once for repeated solves.

    Args:
        A: Constraint matrix (m×n)
        beta: Positive Gram weight
        delta: Positive diagonal shift

    Returns:
        RegularizedGramFactor

    Raises:
        ParameterError: beta or delta not positive
        InputError: non-finite entries in A
    """
    if not (beta > 0 and np.isfinite(beta)):
        raise ParameterError("beta must be positive", context={"beta": beta})
    if not (delta > 0 and np.isfinite(delta)):
        raise ParameterError("delta must be positive", context={"delta": delta})
    A = as_matrix(A)
    m = A.shape[0]
    M = beta * (A @ A.T) + delta * np.eye(m)
    c, _ = cho_factor(M, lower=True)
    chol = np.tril(c)
    chol.setflags(write=False)
    return RegularizedGramFactor(beta=float(beta), delta=float(delta), chol=chol, A_ref=A)


def solve_regularized_gram(factor: RegularizedGramFactor, rhs) -> np.ndarray:
    """Solve (beta·AAᵀ + delta·I)z = rhs with a precomputed factor."""
    rhs = as_vector(rhs, factor.size, name="rhs")
    return cho_solve((factor.chol, True), rhs)


def sherman_morrison_solve(A, q) -> np.ndarray:
    """Solve (AᵀA + I)z = q through the m×m system (I + AAᵀ)ỹ = Aq, then z = q − Aᵀỹ."""
    A = as_matrix(A)
    q = as_vector(q, A.shape[1], name="q")
    m = A.shape[0]
    c, lower = cho_factor(np.eye(m) + A @ A.T, lower=True)
    y = cho_solve((c, lower), A @ q)
    return q - A.T @ y


class LiftedNormalSolver:
    """Cached solver for (AᵀA + I)z = q.

    Uses the Sherman-Morrison reduction when m < n and a direct n×n Cholesky
    otherwise.
    """

    def __init__(self, A):
        self.A = as_matrix(A)
        m, n = self.A.shape
        self.reduced = m < n
        if self.reduced:
            self._factor = cho_factor(np.eye(m) + self.A @ self.A.T, lower=True)
        else:
            self._factor = cho_factor(self.A.T @ self.A + np.eye(n), lower=True)

    def solve(self, q: np.ndarray) -> np.ndarray:
        if self.reduced:
            return q - self.A.T @ cho_solve(self._factor, self.A @ q)
        return cho_solve(self._factor, q)


def spectral_norm_sq(A, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Estimate ρ(AᵀA) by power iteration from a fixed, non-symmetric start.

    The start is ones + 1e-3·(0, 1, ..., n−1), normalized. The all-ones vector
    alone is an eigenvector of AᵀA for many structured A and can pin the
    iteration to a smaller eigenvalue. When the final eigen-residual is not
    small, the exact value ‖A‖₂² is returned instead.

    Args:
        A: Matrix (m×n)
        tol: Relative change at which iteration stops
        max_iter: Iteration cap

    Returns:
        Largest eigenvalue of AᵀA (0.0 for an all-zero A)
    """
    if tol <= 0:
        raise ParameterError("tol must be positive", context={"tol": tol})
    A = as_matrix(A)
    if not np.any(A):
        return 0.0

    n = A.shape[1]
    v = np.ones(n) + 1e-3 * np.arange(n)
    v /= np.linalg.norm(v)

    estimate = 0.0
    for _ in range(max_iter):
        w = A.T @ (A @ v)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            break
        # ‖AᵀAv‖ with ‖v‖=1 bounds the Rayleigh quotient from above and ρ from below
        previous, estimate = estimate, norm_w
        v = w / norm_w
        if abs(estimate - previous) <= tol * estimate:
            break

    w = A.T @ (A @ v)
    rayleigh = float(v @ w)
    if rayleigh <= 0.0 or np.linalg.norm(w - rayleigh * v) > np.sqrt(tol) * rayleigh:
        return float(norm(A, 2) ** 2)
    return estimate


def h_norm_sq(A, delta_prime: float, v) -> float:
    """‖v‖²_H with H = AAᵀ + δ′I, computed as ‖Aᵀv‖² + δ′‖v‖²."""
    v = np.asarray(v, dtype=float)
    Atv = np.asarray(A).T @ v
    return float(Atv @ Atv + delta_prime * (v @ v))
