"""
Tests for the five-block scheme over the dual lift.

Covers:
- Parsing, canonicalization and enumeration of update orders
- The classification table
- Single block updates
- Per-class block invariants, including a corrupted state
- Iterate agreement of the four representative orders with the balanced methods
"""

from functools import partial

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.exceptions import ConfigurationError, ParameterError, TraceError
from src.linalg import factorize_regularized_gram
from src.problems import make_quadratic_problem
from src.solvers import (
    OrderClass,
    PrimalDualState,
    SchemeParams,
    SchemeState,
    UpdateOrder,
    balanced_alm_step,
    block_update,
    check_scheme_invariants,
    classify_order,
    dual_primal_balanced_alm_step,
    enumerate_orders,
    initial_scheme_state,
    iterate,
    scheme_pairs,
    scheme_step,
)
from src.solvers.scheme import (
    BALANCED_ORDER,
    BALANCED_VARIANT_ORDER,
    DUAL_PRIMAL_ORDER,
    DUAL_PRIMAL_VARIANT_ORDER,
    TABLE,
)


def _run_scheme(problem, order, params, iterations, x0=None, lam0=None):
    factor = factorize_regularized_gram(problem.A, params.beta1, params.beta2)
    stepper = partial(scheme_step, order, params=params, problem=problem, factor=factor)
    return iterate(stepper, initial_scheme_state(problem, x0, lam0), iterations)


class TestUpdateOrder:
    """Test order parsing and canonicalization."""

    def test_rotation(self):
        """Test that orders are rotated to start with u."""
        order = UpdateOrder.parse("xbar-v-lambda-ybar-u")
        assert str(order) == "u-xbar-v-lambda-ybar"
        assert order.is_canonical

    def test_aliases(self):
        """Test the symbol aliases for λ, x̄ and ȳ."""
        assert UpdateOrder.parse("u-x̄-v-λ-ȳ") == BALANCED_ORDER
        assert str(UpdateOrder.parse("u-v-lam-xbar-ybar")) == "u-v-lambda-xbar-ybar"

    def test_keep_rotation(self):
        """Test canonical=False leaves the order alone."""
        order = UpdateOrder.parse("v-lambda-xbar-ybar-u", canonical=False)
        assert not order.is_canonical
        assert order.canonicalize() == DUAL_PRIMAL_ORDER

    @pytest.mark.parametrize("text", ["u-v-v-xbar-ybar", "u-v-lambda-xbar", "u-w-lambda-xbar-ybar"])
    def test_invalid(self, text):
        """Test repeated, missing and unknown blocks."""
        with pytest.raises(ConfigurationError):
            UpdateOrder.parse(text)

    def test_step_needs_canonical(self, quadratic):
        """Test that scheme_step refuses an order that does not start with u."""
        params = SchemeParams(1.0, 1.0)
        factor = factorize_regularized_gram(quadratic.A, 1.0, 1.0)
        order = UpdateOrder.parse("v-lambda-xbar-ybar-u", canonical=False)
        with pytest.raises(ConfigurationError):
            scheme_step(order, initial_scheme_state(quadratic), params, quadratic, factor)


class TestClassification:
    """Test enumeration and the four-class table."""

    def test_enumeration(self):
        """Test 24 distinct canonical orders, starting with u-lambda-v-xbar-ybar."""
        orders = enumerate_orders()
        assert len(orders) == 24
        assert len({str(o) for o in orders}) == 24
        assert str(orders[0]) == "u-lambda-v-xbar-ybar"
        assert all(o.is_canonical for o in orders)

    def test_table_covers_enumeration(self):
        """Test that every enumerated order is classified."""
        assert {str(o) for o in enumerate_orders()} == set(TABLE)

    def test_rows_have_six_orders(self):
        """Test the 6/6/6/6 split."""
        counts = {label: 0 for label in OrderClass}
        for order in enumerate_orders():
            counts[classify_order(order)] += 1
        assert set(counts.values()) == {6}

    @pytest.mark.parametrize("order,label", [
        ("u-xbar-v-lambda-ybar", OrderClass.BALANCED_ALM),
        ("u-v-lambda-xbar-ybar", OrderClass.DUAL_PRIMAL),
        ("u-xbar-lambda-v-ybar", OrderClass.BALANCED_ALM_VARIANT),
        ("u-lambda-v-xbar-ybar", OrderClass.DUAL_PRIMAL_VARIANT),
    ])
    def test_representatives(self, order, label):
        """Test the class of each representative order."""
        assert classify_order(UpdateOrder.parse(order)) is label

    def test_primal_family(self):
        """Test that the variant classes share their parent's recovery map."""
        assert OrderClass.BALANCED_ALM_VARIANT.primal_family is OrderClass.BALANCED_ALM
        assert OrderClass.DUAL_PRIMAL_VARIANT.primal_family is OrderClass.DUAL_PRIMAL


class TestParams:
    """Test SchemeParams."""

    def test_balanced_map(self):
        """Test β₁ = 1/r and β₂ = δ."""
        params = SchemeParams.from_balanced(2.0, 0.5)
        assert (params.beta1, params.beta2) == (0.5, 0.5)

    def test_nonpositive(self):
        """Test that β₁ or β₂ ≤ 0 is rejected."""
        with pytest.raises(ParameterError):
            SchemeParams(0.0, 1.0)
        with pytest.raises(ParameterError):
            SchemeParams(1.0, -1.0)


class TestBlockUpdates:
    """Test each block update on the two-variable quadratic."""

    def _state(self, **blocks):
        base = dict(u=np.zeros(2), v=np.zeros(1), lam=np.zeros(1), xbar=np.zeros(2), ybar=np.zeros(1))
        base.update({k: np.asarray(v, dtype=float) for k, v in blocks.items()})
        return SchemeState(**base)

    def _update(self, problem, block, state, beta1=1.0, beta2=1.0):
        factor = factorize_regularized_gram(problem.A, beta1, beta2)
        return block_update(block, state, SchemeParams(beta1, beta2), problem, factor)

    def test_lambda(self, quadratic):
        """Test v = 0, b = 1, ȳ = 0, β₂ = 2 gives λ = −½."""
        state = self._update(quadratic, "lambda", self._state(), beta2=2.0)
        assert_allclose(state.lam, [-0.5])

    def test_v(self, quadratic):
        """Test ȳ = 1, λ = −1 gives v = −⅔ through (AAᵀ + I)v = −2."""
        state = self._update(quadratic, "v", self._state(ybar=[1.0], lam=[-1.0]))
        assert_allclose(state.v, [-2 / 3])

    def test_u(self, quadratic):
        """Test f* = ½‖·‖², v = −1, x̄ = 0 gives u = (½, ½)."""
        state = self._update(quadratic, "u", self._state(v=[-1.0]))
        assert_allclose(state.u, [0.5, 0.5])

    def test_multipliers(self, quadratic):
        """Test the x̄ and ȳ ascent steps."""
        state = self._state(u=[1.0, 0.0], v=[2.0], lam=[0.5], xbar=[0.0, 1.0], ybar=[1.0])
        assert_allclose(self._update(quadratic, "xbar", state).xbar, [3.0, 3.0])
        assert_allclose(self._update(quadratic, "ybar", state, beta2=2.0).ybar, [4.0])

    def test_only_one_block_changes(self, quadratic):
        """Test that an update leaves the other blocks untouched."""
        state = self._state(v=[-1.0], ybar=[1.0])
        after = self._update(quadratic, "u", state)
        assert_allclose(after.v, state.v)
        assert_allclose(after.ybar, state.ybar)

    def test_unknown_block(self, quadratic):
        """Test that an unknown block name is rejected."""
        with pytest.raises(ConfigurationError):
            self._update(quadratic, "w", self._state())

    def test_factor_mismatch(self, quadratic):
        """Test that a factor built for other parameters is rejected."""
        factor = factorize_regularized_gram(quadratic.A, 1.0, 2.0)
        with pytest.raises(ConfigurationError):
            scheme_step(BALANCED_ORDER, initial_scheme_state(quadratic), SchemeParams(1.0, 1.0),
                        quadratic, factor)


class TestInvariants:
    """Test the per-class block relations."""

    @pytest.mark.parametrize("order", [
        BALANCED_ORDER, DUAL_PRIMAL_ORDER, BALANCED_VARIANT_ORDER, DUAL_PRIMAL_VARIANT_ORDER,
    ])
    def test_hold_along_runs(self, test_problem, order):
        """Test that the relations of each class hold over 50 steps."""
        params = SchemeParams(0.5, 0.5)
        states = _run_scheme(test_problem, order, params, 50)
        report = check_scheme_invariants(states, classify_order(order), test_problem, params)
        assert report.ok, report
        assert report.first_violation == -1

    def test_corrupted_ybar(self, quadratic):
        """Test that a perturbed ȳ is reported at its trace index."""
        params = SchemeParams(1.0, 1.0)
        states = _run_scheme(quadratic, BALANCED_ORDER, params, 6)
        states[3] = states[3].with_block("ybar", states[3].ybar + 1.0)
        report = check_scheme_invariants(states, OrderClass.BALANCED_ALM, quadratic, params)
        assert not report.ok
        assert report.first_violation == 3
        assert report.max_deviation == pytest.approx(1.0)

    def test_wrong_class(self, quadratic):
        """Test that a variant-class run breaks the ȳ = b relation."""
        params = SchemeParams(1.0, 1.0)
        states = _run_scheme(quadratic, BALANCED_VARIANT_ORDER, params, 5)
        report = check_scheme_invariants(states, OrderClass.BALANCED_ALM, quadratic, params)
        assert not report.ok

    def test_needs_two_states(self, quadratic):
        """Test that a single state cannot be checked."""
        with pytest.raises(TraceError):
            check_scheme_invariants([initial_scheme_state(quadratic)], OrderClass.BALANCED_ALM,
                                    quadratic, SchemeParams(1.0, 1.0))


class TestScalarExample:
    """Test the four representatives by hand on f = ½x², x = 1, β₁ = β₂ = 1."""

    @pytest.fixture
    def problem(self):
        return make_quadratic_problem([[1.0]], [0.0], [[1.0]], [1.0], name="scalar")

    @pytest.mark.parametrize("order", [BALANCED_ORDER, BALANCED_VARIANT_ORDER])
    def test_balanced_class(self, problem, order):
        """Test x = (0, 0, ¼) and λ = (0, −½, −¾)."""
        params = SchemeParams(1.0, 1.0)
        pairs = scheme_pairs(_run_scheme(problem, order, params, 2), order, params, problem)
        assert_allclose([p[0][0] for p in pairs], [0.0, 0.0, 0.25], atol=1e-12)
        assert_allclose([p[1][0] for p in pairs], [0.0, -0.5, -0.75], atol=1e-12)

    @pytest.mark.parametrize("order", [DUAL_PRIMAL_ORDER, DUAL_PRIMAL_VARIANT_ORDER])
    def test_dual_primal_class(self, problem, order):
        """Test x = (0, 0, ½) and λ = (0, −½, −¾)."""
        params = SchemeParams(1.0, 1.0)
        pairs = scheme_pairs(_run_scheme(problem, order, params, 2), order, params, problem)
        assert_allclose([p[0][0] for p in pairs], [0.0, 0.0, 0.5], atol=1e-12)
        assert_allclose([p[1][0] for p in pairs], [0.0, -0.5, -0.75], atol=1e-12)


@pytest.mark.parametrize("order,step", [
    (BALANCED_ORDER, balanced_alm_step),
    (DUAL_PRIMAL_ORDER, dual_primal_balanced_alm_step),
    (BALANCED_VARIANT_ORDER, balanced_alm_step),
    (DUAL_PRIMAL_VARIANT_ORDER, dual_primal_balanced_alm_step),
])
def test_matches_balanced_methods(test_problem, rng, order, step):
    """Test iterate agreement with the balanced method of the order's class over 200 steps."""
    r, delta = 2.0, 0.5
    x0 = rng.standard_normal(test_problem.n)
    lam0 = rng.standard_normal(test_problem.m)
    params = SchemeParams.from_balanced(r, delta)
    scheme = scheme_pairs(_run_scheme(test_problem, order, params, 200, x0, lam0),
                          order, params, test_problem)
    factor = factorize_regularized_gram(test_problem.A, 1.0 / r, delta)
    alm = iterate(partial(step, test_problem, r=r, delta=delta, factor=factor),
                  PrimalDualState.initial(x0, lam0), 200)
    for (x_s, lam_s), state in zip(scheme, alm):
        assert_allclose(x_s, state.x, atol=1e-8, rtol=1e-8)
        assert_allclose(lam_s, state.lam, atol=1e-8, rtol=1e-8)
