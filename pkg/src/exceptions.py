"""
Custom exception types for the splitting solver suite.

Every error carries a human-readable message plus a context dict so that the
CLI and the logs can report which algorithm, iteration or parameter failed.
"""

from typing import Any, Dict, Optional, Sequence


class SolverError(Exception):
    """Base exception for all solver suite errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        """
        Initialize exception with message and optional context.

        Args:
            message: Human-readable error message
            context: Optional dict with additional context (algorithm, iteration, etc.)
        """
        self.message = message
        self.context = context or {}
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format error message with context."""
        msg = self.message
        if self.context:
            context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
            msg = f"{msg} ({context_str})"
        return msg


class InputError(SolverError):
    """
    Raised when input data is malformed.

    Example:
        raise InputError(
            "Non-finite entries in b",
            context={"field": "b"}
        )
    """
    pass


class DimensionError(InputError):
    """
    Raised when array shapes are incompatible.

    Example:
        raise DimensionError(
            "Shape mismatch",
            context={"field": "A", "expected": "(2, 3)", "actual": "(3, 3)"}
        )
    """
    pass


class TraceError(InputError):
    """
    Raised when a trace is too short or lacks the history a computation needs.

    Example:
        raise TraceError(
            "Trace too short for ergodic average",
            context={"rows": 10, "required": 12}
        )
    """
    pass


class FitWindowError(InputError):
    """Raised when a rate-fit window holds nonpositive gaps or too few points."""
    pass


class ParameterError(SolverError):
    """
    Raised when a scalar parameter is out of its admissible range.

    Example:
        raise ParameterError(
            "gamma must be positive",
            context={"gamma": -1.0}
        )
    """
    pass


class StepSizeError(ParameterError):
    """
    Raised when a step-size condition of a first-order method is violated.

    Example:
        raise StepSizeError(
            "Step-size condition rs > ρ(AᵀA) violated",
            context={"r": 1.0, "s": 1.0, "rho": 2.0}
        )
    """
    pass


class ScheduleError(ParameterError):
    """Raised when a parameter schedule is invalid for the requested method."""
    pass


class ConstructionError(SolverError):
    """Raised when a problem cannot be built from the given data (e.g. Q not SPD)."""
    pass


class RankError(SolverError):
    """
    Raised when a linear system is singular (rank-deficient A).

    Example:
        raise RankError(
            "KKT system is singular",
            context={"m": 2, "rank": 1}
        )
    """
    pass


class UnsupportedProblemError(SolverError):
    """Raised when an algorithm needs structure the problem does not expose."""
    pass


class ConfigurationError(SolverError):
    """
    Raised when configuration is invalid or refers to unknown entities.

    Example:
        raise ConfigurationError(
            "Unknown algorithm",
            context={"algorithm": "newton", "available": ["balanced_alm", "..."]}
        )
    """
    pass


class DivergenceError(SolverError):
    """
    Raised when an iterate becomes non-finite.

    Example:
        raise DivergenceError(
            "Non-finite iterate",
            context={"algorithm": "chambolle_pock", "iteration": 17}
        )
    """
    pass


class VerificationError(SolverError):
    """
    Raised when an equivalence, invariant or bound check fails.

    Example:
        raise VerificationError(
            "Iterates separated",
            context={"pair": "drs-balanced", "first_divergence": 12}
        )
    """
    pass


# Helper functions for creating exceptions with context

def dimension_error(field: str, expected: Sequence[int], actual: Sequence[int]) -> DimensionError:
    """
    Create a DimensionError with standardized context.

    Args:
        field: Name of the offending array
        expected: Expected shape
        actual: Actual shape

    Returns:
        DimensionError with full context
    """
    return DimensionError(
        f"Shape mismatch for '{field}'",
        context={"field": field, "expected": tuple(expected), "actual": tuple(actual)}
    )


def divergence_error(algorithm: str, iteration: int, field: str = "state") -> DivergenceError:
    """
    Create a DivergenceError with standardized context.

    Args:
        algorithm: Name of the running algorithm
        iteration: Iteration at which the non-finite value appeared
        field: Which part of the state went non-finite

    Returns:
        DivergenceError with full context
    """
    return DivergenceError(
        f"Non-finite iterate in '{algorithm}'",
        context={"algorithm": algorithm, "iteration": iteration, "field": field}
    )


def step_size_error(condition: str, **values: float) -> StepSizeError:
    """
    Create a StepSizeError naming the violated condition.

    Args:
        condition: The inequality that must hold, e.g. "r > βρ(AᵀA)"
        **values: The numbers that entered the comparison

    Returns:
        StepSizeError with full context
    """
    return StepSizeError(f"Step-size condition {condition} violated", context=dict(values))
