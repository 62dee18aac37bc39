"""Iterate containers for every solver family.

States are frozen dataclasses; a step never mutates its input. Every state
exposes ``is_finite()`` so the runner can detect divergence uniformly.
"""

from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

import numpy as np


def _all_finite(obj) -> bool:
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, np.ndarray) and not np.all(np.isfinite(value)):
            return False
    return True


def _first_non_finite(obj) -> str:
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, np.ndarray) and not np.all(np.isfinite(value)):
            return f.name
    return "state"


class _FiniteMixin:
    def is_finite(self) -> bool:
        return _all_finite(self)

    def non_finite_field(self) -> str:
        return _first_non_finite(self)


@dataclass(frozen=True)
class PrimalDualState(_FiniteMixin):
    """(x^k, x^{k-1}, λ^k, λ^{k-1}) for the primal-dual methods."""

    x: np.ndarray
    x_prev: np.ndarray
    lam: np.ndarray
    lam_prev: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, x0, lam0) -> "PrimalDualState":
        """Start at (x⁰, λ⁰) with the history convention x^{-1}=x⁰, λ^{-1}=λ⁰."""
        x0 = np.array(x0, dtype=float)
        lam0 = np.array(lam0, dtype=float)
        return cls(x=x0, x_prev=x0.copy(), lam=lam0, lam_prev=lam0.copy(), k=0)

    def advance(self, x: np.ndarray, lam: np.ndarray) -> "PrimalDualState":
        return PrimalDualState(x=x, x_prev=self.x, lam=lam, lam_prev=self.lam, k=self.k + 1)

    def pair(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.x, self.lam


@dataclass(frozen=True)
class LiftedAdmmState(_FiniteMixin):
    """Variables of ADMM on the primal lift min f(x) s.t. Ay = b, x = y."""

    x: np.ndarray
    y: np.ndarray
    lam1: np.ndarray
    lam2: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, x0, lam0, A: np.ndarray) -> "LiftedAdmmState":
        """Start with y⁰ = x⁰ and λ₂⁰ = Aᵀλ⁰, the stationary pairing of the lift."""
        x0 = np.array(x0, dtype=float)
        lam0 = np.array(lam0, dtype=float)
        return cls(x=x0, y=x0.copy(), lam1=lam0, lam2=A.T @ lam0, k=0)

    def pair(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.x, self.lam1


@dataclass(frozen=True)
class DrsState(_FiniteMixin):
    """Douglas-Rachford iterate on the lifted space ℝⁿ × ℝᵐ.

    Attributes:
        w: Governing sequence (x̃, ỹ)
        z: Resolvent-B output (x, y)
        sigma: Lift scaling in Ax = σy
        tau: Resolvent step
        shadow: Resolvent-A output of the step that produced this state
        n: Size of the x-block
        k: Step counter
    """

    w: np.ndarray
    z: np.ndarray
    sigma: float
    tau: float
    shadow: np.ndarray
    n: int
    k: int = 0

    def split(self, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return v[:self.n], v[self.n:]


@dataclass(frozen=True)
class SchemeState(_FiniteMixin):
    """The five blocks of the dual lift: u, v, λ and the multipliers x̄, ȳ."""

    u: np.ndarray
    v: np.ndarray
    lam: np.ndarray
    xbar: np.ndarray
    ybar: np.ndarray
    k: int = 0

    def with_block(self, block: str, value: np.ndarray) -> "SchemeState":
        return replace(self, **{block: value})


@dataclass(frozen=True)
class DualAdmmState(_FiniteMixin):
    """Variables of proximal ADMM on the compact dual min f*(u) + λᵀb s.t. Aᵀλ + u = 0."""

    u: np.ndarray
    lam: np.ndarray
    xbar: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, x0, lam0, A: np.ndarray) -> "DualAdmmState":
        """x̄⁰ = −x⁰ and u⁰ = −Aᵀλ⁰."""
        x0 = np.array(x0, dtype=float)
        lam0 = np.array(lam0, dtype=float)
        return cls(u=-(A.T @ lam0), lam=lam0, xbar=-x0, k=0)


@dataclass(frozen=True)
class AccelState(_FiniteMixin):
    """Iterates of the accelerated methods.

    x_tilde is the extrapolation x^{k} + θ^{k-1}(x^{k} − x^{k-1}) consumed by the
    most recent multiplier update (balanced form); lam_tilde is the multiplier
    extrapolation used by the most recent x-update (dual-primal form).
    """

    x: np.ndarray
    x_prev: np.ndarray
    lam: np.ndarray
    lam_prev: np.ndarray
    x_tilde: Optional[np.ndarray] = None
    lam_tilde: Optional[np.ndarray] = None
    k: int = 0

    @classmethod
    def initial(cls, x0, lam0) -> "AccelState":
        x0 = np.array(x0, dtype=float)
        lam0 = np.array(lam0, dtype=float)
        return cls(x=x0, x_prev=x0.copy(), lam=lam0, lam_prev=lam0.copy(), k=0)

    def pair(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.x, self.lam
