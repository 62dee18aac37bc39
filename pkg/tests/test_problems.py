"""
Tests for the problem model: prox oracles, constructors, the KKT oracle and the catalog.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import (
    ConfigurationError,
    ConstructionError,
    DimensionError,
    ParameterError,
    RankError,
)
from src.problems import (
    ProblemCatalog,
    SaddleCertificate,
    kkt_oracle,
    make_elastic_net_problem,
    make_quadratic_problem,
    problem_from_dict,
    prox_f,
    prox_f_conjugate,
    quadratic_certificate,
    random_elastic_net_problem,
    random_quadratic_problem,
)


def _grid_argmin(fun, center, half_width=10.0, points=400001):
    grid = np.linspace(center - half_width, center + half_width, points)
    return grid[np.argmin(fun(grid))]


class TestProx:
    """Test the proximal oracles."""

    def test_squared_norm(self, quadratic):
        """Test f = ½‖·‖², γ = 1, z = (2, 0) gives (1, 0)."""
        assert_allclose(prox_f(quadratic, 1.0, [2.0, 0.0]), [1.0, 0.0])
        assert_allclose(prox_f(quadratic, 1.0, [2.0, 2.0]), [1.0, 1.0])

    def test_l1_norm(self):
        """Test f = |·|, γ = 1, z = 2 gives 1."""
        problem = make_elastic_net_problem(1e-300, 1.0, [[1.0]], [0.0])
        assert prox_f(problem, 1.0, [2.0])[0] == pytest.approx(1.0)

    def test_elastic_net_values(self):
        """Test the elastic-net prox at points inside and outside the dead zone."""
        no_l1 = make_elastic_net_problem(1.0, 0.0, [[1.0]], [0.0])
        assert prox_f(no_l1, 1.0, [2.0])[0] == pytest.approx(1.0)
        problem = make_elastic_net_problem(1.0, 1.0, [[1.0]], [0.0])
        assert prox_f(problem, 1.0, [3.0])[0] == pytest.approx(1.0)
        assert prox_f(problem, 1.0, [0.4])[0] == 0.0
        assert prox_f(problem, 2.0, [5.0])[0] == pytest.approx(1.0)

    def test_elastic_net_against_grid(self):
        """Test the elastic-net prox against a 1-D grid minimization."""
        problem = make_elastic_net_problem(1.0, 1.0, [[1.0]], [0.0])
        gamma, z = 2.0, 5.0
        expected = _grid_argmin(lambda y: 0.5 * y**2 + np.abs(y) + (y - z) ** 2 / (2 * gamma), z)
        assert prox_f(problem, gamma, [z])[0] == pytest.approx(expected, abs=1e-4)

    def test_firm_nonexpansive(self, random_enet, random_qp, rng):
        """Test ‖prox(z₁) − prox(z₂)‖ ≤ ‖z₁ − z₂‖ on random pairs."""
        for problem in (random_enet, random_qp):
            for _ in range(100):
                z1, z2 = rng.standard_normal((2, problem.n)) * 3
                gamma = rng.uniform(0.1, 5.0)
                p1, p2 = prox_f(problem, gamma, z1), prox_f(problem, gamma, z2)
                assert np.linalg.norm(p1 - p2) <= np.linalg.norm(z1 - z2) + 1e-12
                assert (p1 - p2) @ (z1 - z2) >= np.linalg.norm(p1 - p2) ** 2 - 1e-12

    def test_bad_gamma(self, quadratic):
        """Test that γ ≤ 0 is rejected."""
        with pytest.raises(ParameterError):
            prox_f(quadratic, 0.0, [0.0, 0.0])
        with pytest.raises(ParameterError):
            prox_f_conjugate(quadratic, -1.0, [0.0, 0.0])

    def test_bad_shape(self, quadratic):
        """Test that a wrong-length point is rejected."""
        with pytest.raises(DimensionError):
            prox_f(quadratic, 1.0, [1.0, 2.0, 3.0])


class TestConjugateProx:
    """Test prox_f_conjugate through the Moreau identity."""

    def test_self_conjugate(self, quadratic):
        """Test f = f* = ½‖·‖² at z = (2, 0)."""
        assert_allclose(prox_f_conjugate(quadratic, 1.0, [2.0, 0.0]), [1.0, 0.0])

    def test_l1_projection(self):
        """Test that the conjugate prox of |·| projects onto [−1, 1]."""
        problem = make_elastic_net_problem(1e-300, 1.0, [[1.0]], [0.0])
        assert prox_f_conjugate(problem, 1.0, [3.0])[0] == pytest.approx(1.0)

    def test_elastic_net_conjugate(self):
        """Test f = ½x² + |x|, γ = 1, z = 4: f*(u) = max(|u| − 1, 0)²/2 gives 2.5."""
        problem = make_elastic_net_problem(1.0, 1.0, [[1.0]], [0.0])
        assert prox_f_conjugate(problem, 1.0, [4.0])[0] == pytest.approx(2.5)
        expected = _grid_argmin(
            lambda u: np.maximum(np.abs(u) - 1.0, 0.0) ** 2 / 2 + (u - 4.0) ** 2 / 2, 4.0
        )
        assert expected == pytest.approx(2.5, abs=1e-4)

    def test_moreau_decomposition(self, random_enet, rng):
        """Test z = prox(γ, z) + γ·prox*(1/γ, z/γ)."""
        z = rng.standard_normal(random_enet.n) * 2
        gamma = 0.7
        recomposed = prox_f(random_enet, gamma, z) + gamma * prox_f_conjugate(random_enet, 1 / gamma, z / gamma)
        assert_allclose(recomposed, z, atol=1e-12)

    def test_subgradient_inclusion(self, random_qp, rng):
        """Test (z − u)/γ ∈ ∂f*(u) via the Fenchel-Young equality at the conjugate prox."""
        z = rng.standard_normal(random_qp.n)
        gamma = 1.5
        u = prox_f_conjugate(random_qp, gamma, z)
        x = (z - u) / gamma
        # x ∈ ∂f*(u) ⟺ f(x) + f*(u) = uᵀx
        assert random_qp.value(x) + random_qp.conjugate_value(u) == pytest.approx(u @ x, abs=1e-10)


class TestConstructors:
    """Test the quadratic and elastic-net constructors."""

    def test_quadratic_mu(self, quadratic):
        """Test that μ is the smallest eigenvalue of Q."""
        assert quadratic.mu == pytest.approx(1.0)
        problem = make_quadratic_problem(np.diag([1.0, 4.0]), [1.0, 0.0], [[1.0, 1.0]], [1.0])
        assert problem.mu == pytest.approx(1.0)

    def test_quadratic_not_spd(self):
        """Test that an indefinite or asymmetric Q is rejected."""
        with pytest.raises(ConstructionError):
            make_quadratic_problem(np.diag([1.0, -1.0]), [0.0, 0.0], [[1.0, 1.0]], [1.0])
        with pytest.raises(ConstructionError):
            make_quadratic_problem([[1.0, 2.0], [0.0, 1.0]], [0.0, 0.0], [[1.0, 1.0]], [1.0])

    def test_shape_mismatch(self):
        """Test that A must have as many columns as Q."""
        with pytest.raises(DimensionError):
            make_quadratic_problem(np.eye(2), [0.0, 0.0], [[1.0, 1.0, 1.0]], [1.0])
        with pytest.raises(DimensionError):
            make_quadratic_problem(np.eye(2), [0.0, 0.0], [[1.0, 1.0]], [1.0, 2.0])

    def test_elastic_net_parameters(self):
        """Test that μ ≤ 0 and a negative weight are rejected."""
        with pytest.raises(ParameterError):
            make_elastic_net_problem(0.0, 1.0, [[1.0]], [1.0])
        with pytest.raises(ParameterError):
            make_elastic_net_problem(1.0, -1.0, [[1.0]], [1.0])

    def test_conjugate_values(self):
        """Test the closed-form conjugates of both families."""
        enet = make_elastic_net_problem(2.0, 0.5, [[1.0]], [0.0])
        assert enet.conjugate_value(np.array([1.5])) == pytest.approx(1.0 / 4.0)
        quad = make_quadratic_problem([[2.0]], [1.0], [[1.0]], [0.0])
        assert quad.conjugate_value(np.array([3.0])) == pytest.approx(1.0)

    def test_data_is_read_only(self, quadratic):
        """Test that A and b cannot be modified after construction."""
        with pytest.raises(ValueError):
            quadratic.A[0, 0] = 5.0

    def test_random_instances_are_seeded(self):
        """Test that the random generators are deterministic per seed."""
        a = random_quadratic_problem(5, 2, seed=9)
        b = random_quadratic_problem(5, 2, seed=9)
        assert_allclose(a.A, b.A)
        assert_allclose(a.quadratic.Q, b.quadratic.Q)
        assert a.mu >= 1.0 - 1e-12
        c = random_elastic_net_problem(5, 2, seed=10)
        assert not np.allclose(a.A, c.A)

    def test_random_needs_m_at_most_n(self):
        """Test that m > n is rejected."""
        with pytest.raises(ParameterError):
            random_quadratic_problem(2, 3)


class TestKktOracle:
    """Test the exact saddle point of quadratic problems."""

    def test_symmetric_split(self):
        """Test Q = I₂, c = 0, A = [1 1], b = 1."""
        cert = kkt_oracle(np.eye(2), [0.0, 0.0], [[1.0, 1.0]], [1.0])
        assert_allclose(cert.x_star, [0.5, 0.5])
        assert_allclose(cert.lambda_star, [-0.5])

    def test_linear_term(self):
        """Test Q = I₂, c = (1, 0), A = [1 1], b = 0."""
        cert = kkt_oracle(np.eye(2), [1.0, 0.0], [[1.0, 1.0]], [0.0])
        assert_allclose(cert.x_star, [-0.5, 0.5])
        assert_allclose(cert.lambda_star, [-0.5])

    def test_identity_constraint(self):
        """Test that A = I pins x = b."""
        cert = kkt_oracle(np.eye(2), [0.0, 0.0], np.eye(2), [1.0, 0.0])
        assert_allclose(cert.x_star, [1.0, 0.0])
        assert_allclose(cert.lambda_star, [-1.0, 0.0])

    def test_rank_deficient(self):
        """Test that dependent constraint rows raise RankError."""
        with pytest.raises(RankError):
            kkt_oracle(np.eye(2), [0.0, 0.0], [[1.0, 1.0], [2.0, 2.0]], [1.0, 2.0])

    def test_certificate_verifies(self, random_qp):
        """Test that the certificate of a random instance is feasible and stationary."""
        cert = quadratic_certificate(random_qp)
        assert cert.verify(random_qp, tol=1e-10)

    def test_wrong_certificate(self, quadratic):
        """Test that a non-saddle pair fails verification."""
        assert not SaddleCertificate(np.zeros(2), np.zeros(1)).verify(quadratic)

    def test_certificate_needs_quadratic(self, elastic_net):
        """Test that the KKT oracle needs a quadratic term."""
        with pytest.raises(ConfigurationError):
            quadratic_certificate(elastic_net)


class TestProblemFromDict:
    """Test building problems from the problem-JSON layout."""

    def test_quadratic_defaults(self):
        """Test that Q defaults to I and c to 0."""
        problem = problem_from_dict({"type": "quadratic", "A": [[1, 1]], "b": [1]}, name="q")
        assert problem.name == "q"
        assert_allclose(problem.quadratic.Q, np.eye(2))

    def test_elastic_net(self):
        """Test the elastic-net layout."""
        problem = problem_from_dict({"type": "elastic_net", "mu": 2.0, "weight": 0.1,
                                     "A": [[1, 0]], "b": [1]})
        assert problem.mu == 2.0

    def test_random(self):
        """Test the seeded random layouts."""
        problem = problem_from_dict({"type": "random_quadratic", "n": 4, "m": 2, "seed": 1})
        assert (problem.m, problem.n) == (2, 4)

    def test_unknown_type(self):
        """Test that an unknown type is a configuration error."""
        with pytest.raises(ConfigurationError):
            problem_from_dict({"type": "lasso"})


class TestCatalog:
    """Test the bundled problem catalog."""

    def test_bundled_entries(self):
        """Test that the bundled catalog holds the standard instances."""
        catalog = ProblemCatalog()
        for name in ("quadratic", "scalar", "elastic_net", "random_qp_small"):
            assert name in catalog
        assert "random_qp_small" in catalog.list_problems(tag="random")

    def test_get_builds_problem(self):
        """Test that the quadratic entry matches the documented saddle point."""
        problem = ProblemCatalog().get("quadratic")
        cert = quadratic_certificate(problem)
        assert_allclose(cert.x_star, [0.5, 0.5])

    def test_unknown_name(self):
        """Test that an unknown name raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            ProblemCatalog().get("missing")

    def test_custom_file(self, tmp_path):
        """Test loading a catalog from another file."""
        path = tmp_path / "catalog.yaml"
        path.write_text(
            "problems:\n"
            "  tiny:\n"
            "    description: one variable\n"
            "    spec: {type: quadratic, A: [[1.0]], b: [2.0]}\n"
        )
        catalog = ProblemCatalog(path)
        assert catalog.list_problems() == ["tiny"]
        assert catalog.get("tiny").n == 1

    def test_missing_file(self, tmp_path):
        """Test that a missing catalog file is reported."""
        with pytest.raises(ConfigurationError):
            ProblemCatalog(tmp_path / "none.yaml")
