"""
Tests for the algorithm registry, verification pairs and multi-run studies.

Covers:
- Parameter defaults, auto step sizes and the β₁ = 1/r, β₂ = δ mapping
- Every registered algorithm on the two-variable quadratic
- All verification pairs, negative controls included
- The 24-order sweep on a worker pool
- Rate studies, their checkpoints and fitted slopes
"""

import numpy as np
import pytest

from src.config import ScheduleConfig, SolverParams
from src.exceptions import ConfigurationError, ParameterError, ScheduleError
from src.experiments import (
    ALGORITHM_REGISTRY,
    PAIR_ALIASES,
    PAIRS,
    checkpoints,
    get_algorithm_info,
    get_pair,
    order_sweep,
    rate_study,
    reference_saddle,
    resolve_params,
    resolve_schedule,
    run_algorithm,
    verify_pair,
)
from src.experiments.registry import SCHEME_INFO
from src.problems import ConvexProblem, make_quadratic_problem, quadratic_certificate, soft_threshold
from src.solvers import OrderClass, Schedule
from src.solvers.scheme import BALANCED_ORDER, DUAL_PRIMAL_ORDER


@pytest.fixture
def flat():
    """f = ‖x‖₁ subject to x = 1, which is not strongly convex."""
    return ConvexProblem(A=[[1.0]], b=[1.0], prox=lambda gamma, z: soft_threshold(z, gamma),
                         value=lambda x: float(np.abs(x).sum()), mu=0.0, name="flat")


class TestRegistry:
    """Test parameter resolution and lookup."""

    def test_defaults(self, quadratic):
        """Test r = δ = 1 for the balanced methods."""
        assert resolve_params("balanced_alm", quadratic) == {"r": 1.0, "delta": 1.0}

    def test_explicit_overrides(self, quadratic):
        """Test that explicit values win and foreign keys are dropped."""
        params = resolve_params("balanced_alm", quadratic, {"r": 3.0, "beta": 9.0})
        assert params == {"r": 3.0, "delta": 1.0}

    def test_dual_forms_follow_r_and_delta(self, quadratic):
        """Test β₁ = 1/r and β₂ = δ when only r, δ are given."""
        params = resolve_params("prox_admm_balanced", quadratic, {"r": 2.0, "delta": 0.5})
        assert params == {"beta1": 0.5, "beta2": 0.5}
        scheme = resolve_params(f"scheme:{BALANCED_ORDER}", quadratic, SolverParams(r=4.0))
        assert scheme["beta1"] == pytest.approx(0.25)

    def test_auto_step_sizes(self, quadratic):
        """Test r = 2βρ for proximal ALM and s = 2ρ/r for Chambolle-Pock with ρ = 2."""
        assert resolve_params("proximal_alm", quadratic)["r"] == pytest.approx(4.0)
        cp = resolve_params("chambolle_pock", quadratic)
        assert cp["r"] == 1.0
        assert cp["s"] == pytest.approx(4.0)

    def test_auto_step_sizes_use_dominant_eigenvalue(self):
        """Test s = 2ρ/r = 16 when ρ(AᵀA) = 8 and the ones vector has eigenvalue 2."""
        problem = make_quadratic_problem(np.eye(2), np.zeros(2), [[2.0, -2.0], [1.0, 1.0]], [1.0, 1.0])
        assert resolve_params("chambolle_pock", problem)["s"] == pytest.approx(16.0)
        assert resolve_params("proximal_alm", problem)["r"] == pytest.approx(16.0)

    def test_scheme_info(self):
        """Test that any scheme order maps to the shared entry."""
        assert get_algorithm_info("scheme:xbar-v-lambda-ybar-u") is SCHEME_INFO

    def test_unknown(self):
        """Test that an unknown name raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            get_algorithm_info("gradient_descent")

    def test_schedule_needs_strong_convexity(self, flat):
        """Test that the default schedule is refused when μ = 0."""
        with pytest.raises(ScheduleError):
            resolve_schedule("accel_balanced", flat, {"delta_prime": 1.0})
        schedule = resolve_schedule("accel_balanced", flat, {},
                                    ScheduleConfig(type="constant", r=1.0))
        assert schedule.r(5) == 1.0

    def test_plain_methods_have_no_schedule(self, quadratic):
        """Test that non-schedule algorithms resolve no schedule."""
        assert resolve_schedule("balanced_alm", quadratic, {"r": 1.0}) is None


class TestRunAlgorithm:
    """Test run_algorithm."""

    @pytest.mark.parametrize("name", [
        name for name in ALGORITHM_REGISTRY if not name.startswith("ratio_")
    ] + [f"scheme:{BALANCED_ORDER}", f"scheme:{DUAL_PRIMAL_ORDER}"])
    def test_converges_within_default_k(self, quadratic, name):
        """Test that each algorithm ends near the saddle point at its default K."""
        run = run_algorithm(name, quadratic)
        cert = quadratic_certificate(quadratic)
        assert len(run.trace) == get_algorithm_info(name).default_iterations + 1
        assert np.linalg.norm(run.trace.final.x - cert.x_star) <= 1e-2
        assert np.linalg.norm(run.trace.final.lam - cert.lambda_star) <= 1e-2

    @pytest.mark.parametrize("name", ["ratio_dual_admm", "ratio_dual_primal_alm"])
    def test_ratio_variants_run(self, quadratic, name):
        """Test that the ratio variants produce finite traces."""
        run = run_algorithm(name, quadratic, iterations=50)
        assert len(run.trace) == 51
        assert np.all(np.isfinite(run.trace.xs))

    def test_start_and_class(self, quadratic):
        """Test that row 0 is the given start and scheme runs report their class."""
        run = run_algorithm(f"scheme:{DUAL_PRIMAL_ORDER}", quadratic, iterations=3,
                            x0=[0.2, -0.1], lam0=[0.4])
        np.testing.assert_allclose(run.trace[0].x, [0.2, -0.1], atol=1e-12)
        assert run.order_class is OrderClass.DUAL_PRIMAL
        assert run.iterations == 3

    def test_strict_schedule(self, quadratic):
        """Test that strict runs check the schedule and non-strict ones do not."""
        schedule = Schedule(rate=lambda k: 2.0 ** k, mu=quadratic.mu)
        with pytest.raises(ScheduleError):
            run_algorithm("accel_dual_primal", quadratic, iterations=5, schedule=schedule)
        run = run_algorithm("accel_dual_primal", quadratic, iterations=5, schedule=schedule, strict=False)
        assert len(run.trace) == 6

    def test_reference_saddle_by_iteration(self, elastic_net):
        """Test that the iterated reference of a non-quadratic problem satisfies KKT."""
        cert = reference_saddle(elastic_net)
        assert cert.verify(elastic_net, tol=1e-8)


class TestPairs:
    """Test the registered verification pairs."""

    @pytest.mark.parametrize("name", list(PAIRS))
    def test_pair_passes(self, test_problem, name):
        """Test every pair, negative controls separating by k = 3."""
        result = verify_pair(name, test_problem, iterations=200)
        assert result.passed, result.describe()

    def test_negative_control_describe(self, quadratic):
        """Test the report of a separating pair."""
        result = verify_pair("balanced-vs-dual-primal-negative", quadratic, iterations=20)
        assert result.expect_divergence
        assert result.describe().startswith("DIVERGENCE at k=")

    def test_zero_start(self, scalar):
        """Test that the ratio variant separates from zero at k = 2 on the scalar problem."""
        result = verify_pair("ratio-variant-negative", scalar, iterations=5, seed=None)
        assert result.report.first_divergence == 2

    def test_aliases(self, quadratic):
        """Test that every alternate pair name resolves to a registered pair."""
        for alias, name in PAIR_ALIASES.items():
            assert get_pair(alias) is PAIRS[name]
        result = verify_pair("remark2-negative", quadratic, iterations=10)
        assert result.passed and result.expect_divergence

    def test_algorithm_alias_runs(self, quadratic):
        """Test that an alternate algorithm name runs the registered algorithm."""
        run = run_algorithm("prox_admm_5", quadratic, {"r": 2.0, "delta": 0.5}, iterations=5)
        assert run.name == "prox_admm_balanced"

    def test_unknown_pair(self):
        """Test that an unknown pair lists the registered ones."""
        with pytest.raises(ConfigurationError) as exc_info:
            get_pair("no-such-pair")
        assert "drs-balanced" in exc_info.value.context["available"]


class TestOrderSweep:
    """Test the 24-order sweep."""

    def test_all_orders_converge(self, quadratic):
        """Test that all orders reach the saddle point and split six per class."""
        frame = order_sweep(quadratic, iterations=2000, workers=4)
        assert len(frame) == 24
        assert frame["order"].str.startswith("u-").all()
        assert (frame["x_error"] <= 1e-6).all()
        assert (frame["lambda_error"] <= 1e-6).all()
        assert frame["class"].value_counts().to_dict() == {label.value: 6 for label in OrderClass}

    def test_worker_count_does_not_change_rows(self, quadratic):
        """Test that serial and threaded sweeps return identical rows in the same order."""
        serial = order_sweep(quadratic, iterations=50, workers=1)
        threaded = order_sweep(quadratic, iterations=50, workers=3)
        assert serial.equals(threaded)

    def test_bad_workers(self, quadratic):
        """Test that workers < 1 is rejected."""
        with pytest.raises(ParameterError):
            order_sweep(quadratic, iterations=10, workers=0)


class TestRateStudy:
    """Test rate studies."""

    def test_checkpoints(self):
        """Test the 1-2-5 checkpoints from 50 plus the final K."""
        assert checkpoints(1000) == [50, 100, 200, 500, 1000]
        assert checkpoints(300) == [50, 100, 200, 300]

    def test_balanced(self, quadratic):
        """Test the balanced ALM bound and a slope of at least order one."""
        study = rate_study(quadratic, "balanced_alm", iterations=1000, spot_checks=2)
        assert study.bound_ok
        assert study.slope is not None and study.slope <= -0.85
        assert study.table["K"].tolist() == [50, 100, 200, 500, 1000]

    def test_accelerated(self, quadratic):
        """Test the accelerated bound and a slope of about order two."""
        study = rate_study(quadratic, "accel_balanced", iterations=1000)
        assert study.bound_ok
        assert study.slope is not None and study.slope <= -1.8

    @pytest.mark.slow
    @pytest.mark.parametrize("algorithm,max_slope", [
        ("balanced_alm", -0.85),
        ("dual_primal_alm", -0.85),
        ("accel_balanced", -1.8),
        ("accel_dual_primal", -1.8),
    ])
    def test_slopes_at_5000(self, quadratic, algorithm, max_slope):
        """Test the fitted slope over [500, 5000] and the bound at every K for all four methods."""
        study = rate_study(quadratic, algorithm, iterations=5000)
        assert study.bound_ok
        assert study.slope is not None and study.slope <= max_slope
        assert study.table["K"].iloc[-1] == 5000

    def test_unregistered_algorithm(self, quadratic):
        """Test that algorithms without a bound are rejected."""
        with pytest.raises(ConfigurationError):
            rate_study(quadratic, "lifted_admm", iterations=10)

    def test_accelerated_without_convexity(self, flat):
        """Test that acceleration on μ = 0 needs an explicit schedule."""
        with pytest.raises(ScheduleError):
            rate_study(flat, "accel_dual_primal", iterations=10)
