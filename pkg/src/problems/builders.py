"""Constructors for the bundled problem families and the exact KKT oracle."""

from typing import Any, Mapping

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve

from ..exceptions import ConfigurationError, ParameterError, RankError, dimension_error
from ..linalg import as_matrix, as_vector
from .model import ConvexProblem, QuadraticTerm, SaddleCertificate, soft_threshold


def make_quadratic_problem(Q, c, A, b, name: str = "quadratic") -> ConvexProblem:
    """f(x) = ½xᵀQx + cᵀx subject to Ax = b.

    Raises:
        ConstructionError: Q not symmetric positive definite
        DimensionError: inconsistent shapes
    """
    term = QuadraticTerm.from_data(Q, c)
    A = as_matrix(A)
    if A.shape[1] != term.Q.shape[0]:
        raise dimension_error("A", (A.shape[0], term.Q.shape[0]), A.shape)
    return ConvexProblem(
        A=A,
        b=b,
        prox=term.prox,
        value=term.value,
        mu=term.mu,
        conjugate_value=term.conjugate_value,
        quadratic=term,
        name=name,
    )


def make_elastic_net_problem(mu: float, weight: float, A, b,
                             name: str = "elastic_net") -> ConvexProblem:
    """f(x) = weight·‖x‖₁ + (mu/2)‖x‖² subject to Ax = b.

    Raises:
        ParameterError: mu ≤ 0 or weight < 0
    """
    if not (mu > 0 and np.isfinite(mu)):
        raise ParameterError("mu must be positive", context={"mu": mu})
    if not (weight >= 0 and np.isfinite(weight)):
        raise ParameterError("weight must be nonnegative", context={"weight": weight})
    mu = float(mu)
    weight = float(weight)

    def prox(gamma: float, z: np.ndarray) -> np.ndarray:
        scale = 1.0 + gamma * mu
        return soft_threshold(z / scale, gamma * weight / scale)

    def value(x: np.ndarray) -> float:
        return float(weight * np.sum(np.abs(x)) + 0.5 * mu * (x @ x))

    def conjugate_value(u: np.ndarray) -> float:
        excess = np.maximum(np.abs(u) - weight, 0.0)
        return float(np.sum(excess * excess) / (2.0 * mu))

    return ConvexProblem(
        A=A, b=b, prox=prox, value=value, mu=mu,
        conjugate_value=conjugate_value, name=name,
    )


def kkt_oracle(Q, c, A, b) -> SaddleCertificate:
    """Solve Qx + Aᵀλ = −c, Ax = b by a dense LU factorization.

    Raises:
        RankError: singular KKT matrix (A rank deficient)
    """
    Q = as_matrix(Q, "Q")
    A = as_matrix(A)
    n = Q.shape[0]
    m = A.shape[0]
    c = as_vector(c, n, "c")
    b = as_vector(b, m, "b")
    if A.shape[1] != n:
        raise dimension_error("A", (m, n), A.shape)

    rank = int(np.linalg.matrix_rank(A))
    if rank < m:
        raise RankError("KKT system is singular", context={"m": m, "rank": rank})

    kkt = np.block([[Q, A.T], [A, np.zeros((m, m))]])
    try:
        sol = lu_solve(lu_factor(kkt), np.concatenate([-c, b]))
    except (LinAlgError, ValueError) as e:
        raise RankError("KKT system is singular", context={"error": str(e)}) from e
    if not np.all(np.isfinite(sol)):
        raise RankError("KKT system is singular", context={"m": m, "n": n})
    return SaddleCertificate(x_star=sol[:n], lambda_star=sol[n:])


def quadratic_certificate(problem: ConvexProblem) -> SaddleCertificate:
    """kkt_oracle applied to a problem built by make_quadratic_problem."""
    if problem.quadratic is None:
        raise ConfigurationError("Problem has no quadratic term", context={"problem": problem.name})
    return kkt_oracle(problem.quadratic.Q, problem.quadratic.c, problem.A, problem.b)


def _random_constraints(rng: np.random.Generator, n: int, m: int):
    if m > n:
        raise ParameterError("random instances need m <= n", context={"m": m, "n": n})
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    return A, b


def random_quadratic_problem(n: int, m: int, seed: int = 0) -> ConvexProblem:
    """Seeded quadratic instance with Q = MᵀM/n + I and Gaussian A, b, c."""
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    Q = M.T @ M / n + np.eye(n)
    c = rng.standard_normal(n)
    A, b = _random_constraints(rng, n, m)
    return make_quadratic_problem(Q, c, A, b, name=f"random_quadratic(n={n},m={m},seed={seed})")


def random_elastic_net_problem(n: int, m: int, seed: int = 0,
                               mu: float = 1.0, weight: float = 0.5) -> ConvexProblem:
    """Seeded elastic-net instance with Gaussian A, b."""
    rng = np.random.default_rng(seed)
    A, b = _random_constraints(rng, n, m)
    return make_elastic_net_problem(
        mu, weight, A, b, name=f"random_elastic_net(n={n},m={m},seed={seed})"
    )


def problem_from_dict(data: Mapping[str, Any], name: str = "") -> ConvexProblem:
    """Build a problem from the problem-JSON layout.

    Supported types: quadratic, elastic_net, random_quadratic, random_elastic_net.
    """
    kind = data.get("type")
    label = name or str(kind)
    if kind == "quadratic":
        A = as_matrix(data["A"])
        n = A.shape[1]
        Q = data.get("Q")
        c = data.get("c")
        Q = np.eye(n) if Q is None else Q
        c = np.zeros(n) if c is None else c
        return make_quadratic_problem(Q, c, A, data["b"], name=label)
    if kind == "elastic_net":
        return make_elastic_net_problem(
            float(data.get("mu", 1.0)), float(data.get("weight", 0.0)),
            data["A"], data["b"], name=label,
        )
    if kind == "random_quadratic":
        return random_quadratic_problem(int(data["n"]), int(data["m"]), int(data.get("seed", 0)))
    if kind == "random_elastic_net":
        return random_elastic_net_problem(
            int(data["n"]), int(data["m"]), int(data.get("seed", 0)),
            mu=float(data.get("mu", 1.0)), weight=float(data.get("weight", 0.5)),
        )
    raise ConfigurationError("Unknown problem type", context={"type": kind})
