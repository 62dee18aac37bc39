"""Utility modules for the splitting solver suite."""

from .logger import (
    configure_logging,
    get_logger,
    log_error_with_context,
    log_run_summary,
    log_solver_event,
)

__all__ = [
    "configure_logging",
    "get_logger",
    "log_error_with_context",
    "log_run_summary",
    "log_solver_event",
]
