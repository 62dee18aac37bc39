"""
Gauss-Seidel scheme over the dual lift

    min f*(u) + λᵀb   s.t.   −Aᵀv = u,  v = λ

with multipliers x̄, ȳ and parameters β₁, β₂. An update order is a
permutation of the five blocks; orders are canonicalized to start with u,
leaving 24 distinct algorithms that fall into four equivalence classes.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import ConfigurationError, ParameterError, TraceError
from ..linalg import RegularizedGramFactor, solve_regularized_gram
from ..problems.model import ConvexProblem, prox_f_conjugate
from .states import SchemeState


BLOCKS = ("u", "v", "lambda", "xbar", "ybar")

_ALIASES = {
    "lam": "lambda",
    "λ": "lambda",
    "x̄": "xbar",
    "ȳ": "ybar",
}

# block name -> SchemeState field
_FIELDS = {"u": "u", "v": "v", "lambda": "lam", "xbar": "xbar", "ybar": "ybar"}


@dataclass(frozen=True)
class UpdateOrder:
    """A permutation of the five scheme blocks."""

    sequence: Tuple[str, ...]

    def __post_init__(self):
        seq = tuple(self.sequence)
        if len(seq) != len(BLOCKS) or set(seq) != set(BLOCKS):
            raise ConfigurationError(
                "Update order must use each of u, v, lambda, xbar, ybar exactly once",
                context={"order": "-".join(seq)}
            )
        object.__setattr__(self, "sequence", seq)

    @classmethod
    def parse(cls, text: str, canonical: bool = True) -> "UpdateOrder":
        """Parse a hyphenated order such as "u-xbar-v-lambda-ybar"."""
        names = [_ALIASES.get(part.strip(), part.strip()) for part in text.split("-")]
        for name in names:
            if name not in BLOCKS:
                raise ConfigurationError(f"Unknown block '{name}'", context={"order": text})
        order = cls(tuple(names))
        return order.canonicalize() if canonical else order

    def canonicalize(self) -> "UpdateOrder":
        """Rotate so that u comes first."""
        i = self.sequence.index("u")
        return UpdateOrder(self.sequence[i:] + self.sequence[:i])

    @property
    def is_canonical(self) -> bool:
        return self.sequence[0] == "u"

    def __str__(self) -> str:
        return "-".join(self.sequence)

    def __iter__(self):
        return iter(self.sequence)


@dataclass(frozen=True)
class SchemeParams:
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ParameterError(f"{name} must be positive", context={name: value})

    @classmethod
    def from_balanced(cls, r: float, delta: float) -> "SchemeParams":
        """β₁ = 1/r, β₂ = δ: the map under which the scheme reproduces the balanced methods."""
        return cls(beta1=1.0 / r, beta2=delta)


class OrderClass(str, Enum):
    BALANCED_ALM = "BALANCED_ALM"
    BALANCED_ALM_VARIANT = "BALANCED_ALM_VARIANT"
    DUAL_PRIMAL = "DUAL_PRIMAL"
    DUAL_PRIMAL_VARIANT = "DUAL_PRIMAL_VARIANT"

    @property
    def primal_family(self) -> "OrderClass":
        """The class whose primal recovery map applies."""
        if self in (OrderClass.BALANCED_ALM, OrderClass.BALANCED_ALM_VARIANT):
            return OrderClass.BALANCED_ALM
        return OrderClass.DUAL_PRIMAL


_TABLE_ROWS: Dict[OrderClass, Tuple[str, ...]] = {
    OrderClass.BALANCED_ALM: (
        "u-xbar-v-lambda-ybar", "u-xbar-lambda-ybar-v", "u-xbar-ybar-v-lambda",
        "u-lambda-xbar-ybar-v", "u-lambda-ybar-xbar-v", "u-ybar-xbar-v-lambda",
    ),
    OrderClass.BALANCED_ALM_VARIANT: (
        "u-xbar-lambda-v-ybar", "u-xbar-v-ybar-lambda", "u-xbar-ybar-lambda-v",
        "u-lambda-xbar-v-ybar", "u-ybar-xbar-lambda-v", "u-ybar-lambda-xbar-v",
    ),
    OrderClass.DUAL_PRIMAL: (
        "u-v-lambda-xbar-ybar", "u-v-lambda-ybar-xbar", "u-v-xbar-lambda-ybar",
        "u-lambda-ybar-v-xbar", "u-ybar-v-xbar-lambda", "u-ybar-v-lambda-xbar",
    ),
    OrderClass.DUAL_PRIMAL_VARIANT: (
        "u-lambda-v-xbar-ybar", "u-v-xbar-ybar-lambda", "u-v-ybar-lambda-xbar",
        "u-v-ybar-xbar-lambda", "u-lambda-v-ybar-xbar", "u-ybar-lambda-v-xbar",
    ),
}

TABLE: Dict[str, OrderClass] = {
    order: label for label, orders in _TABLE_ROWS.items() for order in orders
}

# Representatives with an exact iterate correspondence
BALANCED_ORDER = UpdateOrder.parse("u-xbar-v-lambda-ybar")
DUAL_PRIMAL_ORDER = UpdateOrder.parse("u-v-lambda-xbar-ybar")
BALANCED_VARIANT_ORDER = UpdateOrder.parse("u-xbar-lambda-v-ybar")
DUAL_PRIMAL_VARIANT_ORDER = UpdateOrder.parse("u-lambda-v-xbar-ybar")


def initial_scheme_state(problem: ConvexProblem, x0=None, lam0=None) -> SchemeState:
    """u⁰ = −Aᵀλ⁰, v⁰ = λ⁰, x̄⁰ = −x⁰, ȳ⁰ = b."""
    x0 = np.zeros(problem.n) if x0 is None else np.array(x0, dtype=float)
    lam0 = np.zeros(problem.m) if lam0 is None else np.array(lam0, dtype=float)
    return SchemeState(
        u=-(problem.A.T @ lam0), v=lam0.copy(), lam=lam0.copy(),
        xbar=-x0, ybar=np.array(problem.b, dtype=float), k=0,
    )


def _check_factor(problem: ConvexProblem, params: SchemeParams, factor: RegularizedGramFactor):
    if not factor.matches(problem.A, params.beta1, params.beta2):
        raise ConfigurationError(
            "Gram factor does not match β₁AAᵀ + β₂I",
            context={"factor_beta": factor.beta, "factor_delta": factor.delta,
                     "beta1": params.beta1, "beta2": params.beta2}
        )


def block_update(
    block: str,
    state: SchemeState,
    params: SchemeParams,
    problem: ConvexProblem,
    factor: RegularizedGramFactor,
) -> SchemeState:
    """Replace one block using the current values of all others.

    Raises:
        ConfigurationError: unknown block name
    """
    A, b = problem.A, problem.b
    beta1, beta2 = params.beta1, params.beta2
    if block == "u":
        value = prox_f_conjugate(problem, 1.0 / beta1, -(A.T @ state.v) - state.xbar / beta1)
    elif block == "v":
        rhs = -(A @ state.xbar) - state.ybar - beta1 * (A @ state.u) + beta2 * state.lam
        value = solve_regularized_gram(factor, rhs)
    elif block == "lambda":
        value = state.v - (b - state.ybar) / beta2
    elif block == "xbar":
        value = state.xbar + beta1 * (state.u + A.T @ state.v)
    elif block == "ybar":
        value = state.ybar + beta2 * (state.v - state.lam)
    else:
        raise ConfigurationError(f"Unknown block '{block}'", context={"block": block})
    return state.with_block(_FIELDS[block], value)


def scheme_step(
    order: UpdateOrder,
    state: SchemeState,
    params: SchemeParams,
    problem: ConvexProblem,
    factor: RegularizedGramFactor,
) -> SchemeState:
    """Apply the five block updates in ``order``, each seeing the blocks already updated."""
    if not order.is_canonical:
        raise ConfigurationError("Order must start with u", context={"order": str(order)})
    _check_factor(problem, params, factor)
    for block in order:
        state = block_update(block, state, params, problem, factor)
    return state.with_block("k", state.k + 1)


def enumerate_orders() -> List[UpdateOrder]:
    """All 24 canonical orders, lexicographic with λ < v < x̄ < ȳ."""
    rest = ("lambda", "v", "xbar", "ybar")
    return [UpdateOrder(("u",) + perm) for perm in itertools.permutations(rest)]


def classify_order(order: UpdateOrder) -> OrderClass:
    """Equivalence class of a canonical order.

    Raises:
        ConfigurationError: order not in the table
    """
    label = TABLE.get(str(order))
    if label is None:
        raise ConfigurationError("Order is not a canonical scheme order", context={"order": str(order)})
    return label


def recover_primal_balanced(states: Sequence[SchemeState]) -> List[np.ndarray]:
    """x^k = −x̄^k."""
    return [-s.xbar for s in states]


def recover_primal_dual_primal(
    states: Sequence[SchemeState], params: SchemeParams, problem: ConvexProblem
) -> List[np.ndarray]:
    """x⁰ = −x̄⁰ and x^{k+1} = −x̄^k − β₁u^{k+1} − β₁Aᵀv^k.

    Raises:
        TraceError: empty state sequence
    """
    if not states:
        raise TraceError("Recovery needs at least the initial state")
    A, beta1 = problem.A, params.beta1
    xs = [-states[0].xbar]
    for prev, cur in zip(states, states[1:]):
        xs.append(-prev.xbar - beta1 * cur.u - beta1 * (A.T @ prev.v))
    return xs


def scheme_pairs(
    states: Sequence[SchemeState],
    order: UpdateOrder,
    params: SchemeParams,
    problem: ConvexProblem,
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(x^k, λ^k) with the class-appropriate recovery map and λ^k = v^k."""
    family = classify_order(order).primal_family
    if family is OrderClass.BALANCED_ALM:
        xs = recover_primal_balanced(states)
    else:
        xs = recover_primal_dual_primal(states, params, problem)
    return [(x, s.v) for x, s in zip(xs, states)]


@dataclass
class InvariantReport:
    """Result of check_scheme_invariants.

    Attributes:
        relation: Which relation was checked
        ok: True when no violation was found
        first_violation: Trace index of the first offending state, -1 if none
        max_deviation: Largest deviation seen over the checked range
    """

    relation: str
    ok: bool
    first_violation: int = -1
    max_deviation: float = 0.0


def check_scheme_invariants(
    states: Sequence[SchemeState],
    label: OrderClass,
    problem: ConvexProblem,
    params: SchemeParams,
    tol: float = 1e-10,
) -> InvariantReport:
    """Check the per-class relations between the scheme blocks.

    BALANCED_ALM and DUAL_PRIMAL: ȳ^{k+1} = b for k ≥ 0, and v^{k+1} = λ^{k+1} for
    k ≥ 1 (also k = 0 when ȳ⁰ = b). The variant classes:
    ȳ^{k+1} = b + β₂(v^{k+1} − v^k).
    """
    label = OrderClass(label)
    if len(states) < 2:
        raise TraceError("Invariant check needs at least two states", context={"states": len(states)})
    b = problem.b
    variant = label in (OrderClass.BALANCED_ALM_VARIANT, OrderClass.DUAL_PRIMAL_VARIANT)
    relation = "ybar = b + beta2 (v - v_prev)" if variant else "ybar = b and v = lambda"
    start_ok = bool(np.linalg.norm(states[0].ybar - b) <= tol)
    report = InvariantReport(relation=relation, ok=True)
    for k in range(len(states) - 1):
        cur = states[k + 1]
        if variant:
            deviation = float(np.linalg.norm(cur.ybar - b - params.beta2 * (cur.v - states[k].v)))
        else:
            deviation = float(np.linalg.norm(cur.ybar - b))
            if k >= 1 or start_ok:
                deviation = max(deviation, float(np.linalg.norm(cur.v - cur.lam)))
        report.max_deviation = max(report.max_deviation, deviation)
        if deviation > tol and report.ok:
            report.ok = False
            report.first_violation = k + 1
    return report
