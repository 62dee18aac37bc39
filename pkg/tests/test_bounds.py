"""
Tests for the ergodic gap bounds.

Covers:
- Bound constants and the back-extrapolated multiplier on the scalar problem
- The four bounds on real runs, at the saddle point and at random reference pairs
- A wrong multiplier offset breaking the dual-primal bound
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.diagnostics import (
    BoundKind,
    ErgodicSpec,
    back_extrapolated_multiplier,
    bound_constant,
    check_rate_bound,
)
from src.exceptions import ParameterError
from src.experiments import reference_saddle, run_algorithm
from src.solvers import constant_schedule, default_schedule


class TestConstants:
    """Test C on f = ½x², x = 1, from zero with r = δ = 1."""

    def test_back_extrapolated_multiplier(self, scalar):
        """Test λ^{-1} = λ⁰ − r⁰H⁻¹(Ax⁰ − b) = ½."""
        assert_allclose(back_extrapolated_multiplier(scalar, [0.0], [0.0], 1.0, 1.0), [0.5])

    def test_dual_primal(self, scalar):
        """Test C = ½‖λ⁰ − λ‖²_H = ¼ at the reference (0, −½)."""
        C = bound_constant(scalar, BoundKind.DUAL_PRIMAL, constant_schedule(1.0, delta_prime=1.0),
                           [0.0], [0.0], [0.0], [-0.5])
        assert C == pytest.approx(0.25)

    def test_balanced(self, scalar):
        """Test C = ½‖λ^{-1} − λ‖²_H = 1 at the reference (0, −½)."""
        C = bound_constant(scalar, BoundKind.BALANCED, constant_schedule(1.0, delta_prime=1.0),
                           [0.0], [0.0], [0.0], [-0.5])
        assert C == pytest.approx(1.0)

    def test_explicit_history(self, scalar):
        """Test that an explicit λ^{-1} overrides the back-extrapolated one."""
        C = bound_constant(scalar, "balanced", constant_schedule(1.0, delta_prime=1.0),
                           [0.0], [0.0], [0.0], [-0.5], lam_prev=[-0.5])
        assert C == pytest.approx(0.0)

    def test_kind_properties(self):
        """Test which kinds are weighted and which average λ from index 1."""
        assert BoundKind.ACCEL_BALANCED.weighted
        assert not BoundKind.BALANCED.weighted
        assert BoundKind.ACCEL_DUAL_PRIMAL.ergodic_spec().lambda_index_offset == 1
        assert BoundKind.BALANCED.ergodic_spec().lambda_index_offset == 0


PLAIN = [("balanced_alm", BoundKind.BALANCED), ("dual_primal_alm", BoundKind.DUAL_PRIMAL)]
ACCEL = [("accel_balanced", BoundKind.ACCEL_BALANCED),
         ("accel_dual_primal", BoundKind.ACCEL_DUAL_PRIMAL)]


def _random_start(problem, seed=7):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(problem.n), rng.standard_normal(problem.m)


@pytest.mark.parametrize("algorithm,kind", PLAIN)
def test_plain_bound_holds(test_problem, algorithm, kind):
    """Test (K+1)·gap ≤ C for K ≤ 300 with r = 2, δ = ½."""
    r, delta, K = 2.0, 0.5, 300
    x0, lam0 = _random_start(test_problem)
    run = run_algorithm(algorithm, test_problem, {"r": r, "delta": delta}, K + 1, x0=x0, lam0=lam0)
    ref = reference_saddle(test_problem)
    check = check_rate_bound(test_problem, run.trace, kind, constant_schedule(r, delta_prime=r * delta),
                             ref.x_star, ref.lambda_star, horizon=K)
    assert check.ok, check.violations[:5]
    assert len(check.table) == K + 1
    assert (check.table["gap"] >= -1e-10).all()


@pytest.mark.parametrize("algorithm,kind", ACCEL)
def test_accelerated_bound_holds(test_problem, algorithm, kind):
    """Test (Σ r^k)·gap ≤ C for K ≤ 300 under r^k = μ(k+1)/3."""
    K = 300
    schedule = default_schedule(test_problem.mu)
    x0, lam0 = _random_start(test_problem)
    run = run_algorithm(algorithm, test_problem, iterations=K + 1, schedule=schedule, x0=x0, lam0=lam0)
    ref = reference_saddle(test_problem)
    check = check_rate_bound(test_problem, run.trace, kind, schedule, ref.x_star, ref.lambda_star,
                             horizon=K)
    assert check.ok, check.violations[:5]
    assert_allclose(check.table["weight_sum"].iloc[-1], sum(schedule.r(k) for k in range(K + 1)))


@pytest.mark.parametrize("algorithm,kind", PLAIN)
def test_bound_at_random_reference(quadratic, algorithm, kind):
    """Test the bound at reference pairs away from the saddle point."""
    run = run_algorithm(algorithm, quadratic, {"r": 1.0, "delta": 1.0}, 101)
    schedule = constant_schedule(1.0, delta_prime=1.0)
    rng = np.random.default_rng(11)
    for _ in range(5):
        x_ref = rng.standard_normal(2)
        lam_ref = rng.standard_normal(1)
        check = check_rate_bound(quadratic, run.trace, kind, schedule, x_ref, lam_ref, horizon=100)
        assert check.ok, check.violations[:5]


class TestNegativeControl:
    """Test that averaging λ from the wrong index breaks the dual-primal bound."""

    def test_wrong_lambda_offset(self, scalar):
        """Test gap ½ > C = ¼ at K = 0 when λ is averaged from λ⁰."""
        run = run_algorithm("dual_primal_alm", scalar, {"r": 1.0, "delta": 1.0}, 1)
        schedule = constant_schedule(1.0, delta_prime=1.0)
        x_ref, lam_ref = np.array([0.0]), np.array([-0.5])

        right = check_rate_bound(scalar, run.trace, BoundKind.DUAL_PRIMAL, schedule,
                                 x_ref, lam_ref, horizon=0)
        assert right.ok
        assert right.table["gap"].iloc[0] == pytest.approx(0.0)

        wrong = check_rate_bound(scalar, run.trace, BoundKind.DUAL_PRIMAL, schedule, x_ref, lam_ref,
                                 horizon=0, ergodic=ErgodicSpec(x_index_offset=1, lambda_index_offset=0))
        assert wrong.constant == pytest.approx(0.25)
        assert wrong.table["gap"].iloc[0] == pytest.approx(0.5)
        assert wrong.violations == [0]

    def test_negative_tolerance(self, scalar):
        """Test that tol < 0 is rejected."""
        run = run_algorithm("dual_primal_alm", scalar, {"r": 1.0, "delta": 1.0}, 1)
        with pytest.raises(ParameterError):
            check_rate_bound(scalar, run.trace, BoundKind.DUAL_PRIMAL, constant_schedule(1.0),
                             [0.0], [0.0], tol=-1.0)


@pytest.mark.slow
@pytest.mark.parametrize("algorithm,kind", PLAIN + ACCEL)
def test_bounds_hold_for_every_k_up_to_2000(test_problem, algorithm, kind):
    """Test W_K·gap ≤ C at every K ≤ 2000 for all four bounds."""
    K = 2000
    x0, lam0 = _random_start(test_problem)
    if kind.weighted:
        schedule = default_schedule(test_problem.mu)
        run = run_algorithm(algorithm, test_problem, iterations=K + 1, schedule=schedule,
                            x0=x0, lam0=lam0)
    else:
        r, delta = 2.0, 0.5
        schedule = constant_schedule(r, delta_prime=r * delta)
        run = run_algorithm(algorithm, test_problem, {"r": r, "delta": delta}, K + 1, x0=x0, lam0=lam0)
    ref = reference_saddle(test_problem)
    check = check_rate_bound(test_problem, run.trace, kind, schedule, ref.x_star, ref.lambda_star,
                             horizon=K)
    assert check.ok, check.violations[:5]
    assert len(check.table) == K + 1
