"""Shared problem instances for the solver tests."""

import numpy as np
import pytest

from src.problems import (
    make_elastic_net_problem,
    make_quadratic_problem,
    random_elastic_net_problem,
    random_quadratic_problem,
)


@pytest.fixture
def quadratic():
    """Q = I₂, c = 0, A = [1 1], b = 1; saddle point ((½, ½), −½)."""
    return make_quadratic_problem(np.eye(2), np.zeros(2), [[1.0, 1.0]], [1.0], name="quadratic")


@pytest.fixture
def scalar():
    """f = ½x² subject to x = 1."""
    return make_quadratic_problem([[1.0]], [0.0], [[1.0]], [1.0], name="scalar")


@pytest.fixture
def elastic_net():
    """Elastic net with weight ½, μ = 1, four variables and two constraints."""
    A = [[1.0, 2.0, 0.0, -1.0], [0.0, 1.0, 1.0, 1.0]]
    return make_elastic_net_problem(1.0, 0.5, A, [1.0, -0.5], name="elastic_net")


@pytest.fixture
def random_qp():
    """Seeded random quadratic, n = 6, m = 3."""
    return random_quadratic_problem(6, 3, seed=3)


@pytest.fixture
def random_enet():
    """Seeded random elastic net, n = 8, m = 3."""
    return random_elastic_net_problem(8, 3, seed=5)


@pytest.fixture(params=["quadratic", "elastic_net"])
def test_problem(request):
    """The quadratic and elastic-net instances in turn."""
    return request.getfixturevalue(request.param)


@pytest.fixture
def rng():
    """Seeded generator for random starts."""
    return np.random.default_rng(1234)
