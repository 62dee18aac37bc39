"""Configuration module for the splitting solver suite."""

from .schema import (
    ALGORITHM_ALIASES,
    ALGORITHM_NAMES,
    SCHEDULE_ALIASES,
    ExperimentConfig,
    ProblemSpec,
    ScheduleConfig,
    SolverParams,
    validate_algorithm_name,
)
from .loader import ConfigLoader, load_experiment, load_problem

__all__ = [
    'ALGORITHM_ALIASES',
    'ALGORITHM_NAMES',
    'SCHEDULE_ALIASES',
    'ExperimentConfig',
    'ProblemSpec',
    'ScheduleConfig',
    'SolverParams',
    'validate_algorithm_name',
    'ConfigLoader',
    'load_experiment',
    'load_problem',
]
