"""Centralized logging configuration for the splitting solver suite.

This module provides structured logging with:
- Contextual information (algorithm, run_id, iteration)
- Console and optional rotating file output
- Configuration via environment variables

Usage:
    from src.utils.logger import get_logger

    logger = get_logger(__name__)
    logger.info("Run finished", extra={"algorithm": "balanced_alm", "iteration": 1000})

Environment:
    ALM_LOG_LEVEL               default WARNING
    ALM_LOG_NO_COLOR            "true" disables ANSI colors
    ALM_LOG_TO_FILE             "true" adds a rotating file handler under ./logs
    ALM_AUTO_CONFIGURE_LOGGING  "false" skips configuration on import
"""

import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional


# Global configuration
_CONFIGURED = False
_LOG_DIR: Optional[Path] = None
_LOG_LEVEL: Optional[str] = None

# Context fields every record carries; file records print them as fixed columns
SOLVER_CONTEXT_FIELDS = ("algorithm", "run_id", "iteration")

# LogRecord attributes that extra= may not overwrite
_RESERVED_ATTRS = frozenset(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}

CONSOLE_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
FILE_FORMAT = (
    "%(asctime)s | %(levelname)-8s | %(name)-28s | "
    "%(algorithm)-24s | %(run_id)-12s | %(iteration)-8s | %(message)s"
)


def _env_flag(name: str, default: str = "") -> bool:
    return os.getenv(name, default).lower() == "true"


class ContextFilter(logging.Filter):
    """Fill missing solver context fields with '-'."""

    def filter(self, record: logging.LogRecord) -> bool:
        for name in SOLVER_CONTEXT_FIELDS:
            if not hasattr(record, name):
                setattr(record, name, "-")
        return True


class ColoredFormatter(logging.Formatter):
    """Console formatter that colors the level name."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        levelname = record.levelname
        color = self.COLORS.get(levelname)
        if color:
            record.levelname = f"{color}{levelname:8}{self.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


def _console_handler(level: str) -> logging.Handler:
    # stderr keeps CSV written to stdout clean
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    formatter_cls = logging.Formatter if _env_flag("ALM_LOG_NO_COLOR") else ColoredFormatter
    handler.setFormatter(formatter_cls(CONSOLE_FORMAT, datefmt="%H:%M:%S"))
    handler.addFilter(ContextFilter())
    return handler


def _file_handler(level: str, log_dir: Path, file_name: Optional[str],
                  max_bytes: int, backup_count: int) -> logging.Handler:
    log_dir.mkdir(parents=True, exist_ok=True)
    file_name = file_name or f"solver-{datetime.now():%Y%m%d}.log"
    handler = RotatingFileHandler(log_dir / file_name, maxBytes=max_bytes, backupCount=backup_count)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    handler.addFilter(ContextFilter())
    return handler


def configure_logging(
    level: Optional[str] = None,
    log_to_file: Optional[bool] = None,
    log_to_console: bool = True,
    log_dir: Optional[str] = None,
    log_file_name: Optional[str] = None,
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5,
    force: bool = False
) -> None:
    """Configure the root logger for solver runs.

    Args:
        level: Log level. Defaults to ALM_LOG_LEVEL or WARNING.
        log_to_file: Add a rotating file handler. Defaults to ALM_LOG_TO_FILE.
        log_to_console: Log to stderr
        log_dir: Directory for log files. Defaults to ./logs
        log_file_name: Defaults to solver-YYYYMMDD.log
        max_bytes: Size at which the log file rotates
        backup_count: Rotated files to keep
        force: Reconfigure even if logging was already configured
    """
    global _CONFIGURED, _LOG_DIR, _LOG_LEVEL

    if _CONFIGURED and not force:
        return

    _LOG_LEVEL = (level or os.getenv("ALM_LOG_LEVEL", "WARNING")).upper()
    if log_to_file is None:
        log_to_file = _env_flag("ALM_LOG_TO_FILE")

    root_logger = logging.getLogger()
    root_logger.setLevel(_LOG_LEVEL)
    root_logger.handlers.clear()

    if log_to_console:
        root_logger.addHandler(_console_handler(_LOG_LEVEL))
    if log_to_file:
        _LOG_DIR = Path(log_dir) if log_dir else Path.cwd() / "logs"
        root_logger.addHandler(_file_handler(_LOG_LEVEL, _LOG_DIR, log_file_name, max_bytes, backup_count))

    _CONFIGURED = True
    logging.getLogger(__name__).debug(
        f"Logging configured: level={_LOG_LEVEL}, file={log_to_file}, console={log_to_console}"
    )


def get_logger(name: str) -> logging.Logger:
    """Get a logger with the specified name, configuring logging on first use.

    Args:
        name: Logger name (typically __name__)
    """
    if not _CONFIGURED:
        configure_logging()
    return logging.getLogger(name)


# Convenience functions for common logging patterns

def log_solver_event(
    logger: logging.Logger,
    event: str,
    algorithm: str,
    details: Optional[Dict[str, Any]] = None
) -> None:
    """Log a solver lifecycle event (start, factorization, verification) with context.

    Args:
        logger: Logger instance
        event: Description of the event
        algorithm: Algorithm name
        details: Extra record fields such as iteration or max_deviation
    """
    extra = {"algorithm": algorithm, **(details or {})}
    logger.info(f"{algorithm}: {event}", extra=extra)


def log_run_summary(
    logger: logging.Logger,
    algorithm: str,
    iterations: int,
    residual: float,
    duration_ms: Optional[float] = None,
    run_id: Optional[str] = None
) -> None:
    """Log the outcome of a finished run.

    Args:
        residual: Final primal residual ‖Ax - b‖
        duration_ms: Wall time in milliseconds
    """
    msg = f"{algorithm} finished {iterations} iterations, residual={residual:.3e}"
    if duration_ms is not None:
        msg += f" ({duration_ms:.2f}ms)"
    logger.info(msg, extra={"algorithm": algorithm, "iteration": iterations, "run_id": run_id or "-"})


def log_error_with_context(
    logger: logging.Logger,
    error: Exception,
    context: Dict[str, Any],
    message: Optional[str] = None
) -> None:
    """Log an error with its context fields.

    Context keys that collide with LogRecord attributes are dropped. The
    traceback is attached only at DEBUG level.
    """
    msg = message or f"{type(error).__name__}: {error}"
    extra = {k: v for k, v in context.items() if k not in _RESERVED_ATTRS}
    logger.error(msg, extra=extra, exc_info=logger.isEnabledFor(logging.DEBUG))


def set_log_level(level: str) -> None:
    """Change the level of the root logger and all its handlers."""
    global _LOG_LEVEL

    _LOG_LEVEL = level.upper()
    root_logger = logging.getLogger()
    root_logger.setLevel(_LOG_LEVEL)
    for handler in root_logger.handlers:
        handler.setLevel(_LOG_LEVEL)
    get_logger(__name__).debug(f"Log level changed to {_LOG_LEVEL}")


def get_log_dir() -> Optional[Path]:
    """Current log directory, or None if file logging is off."""
    return _LOG_DIR


def get_log_level() -> Optional[str]:
    """Current log level, or None if not configured."""
    return _LOG_LEVEL


if _env_flag("ALM_AUTO_CONFIGURE_LOGGING", "true"):
    configure_logging()
