"""Algorithm registry, verification pairs and multi-run studies driven by the CLI."""

from .registry import (
    ALGORITHM_REGISTRY,
    DEFAULT_ITERATIONS,
    AlgorithmInfo,
    AlgorithmPlan,
    AlgorithmRun,
    build_algorithm,
    get_algorithm_info,
    reference_saddle,
    resolve_params,
    resolve_schedule,
    run_algorithm,
)
from .pairs import PAIR_ALIASES, PAIRS, PairResult, VerificationPair, get_pair, random_start, verify_all, verify_pair
from .studies import RATE_KINDS, RateStudy, checkpoints, order_sweep, rate_study

__all__ = [
    "ALGORITHM_REGISTRY",
    "DEFAULT_ITERATIONS",
    "AlgorithmInfo",
    "AlgorithmPlan",
    "AlgorithmRun",
    "build_algorithm",
    "get_algorithm_info",
    "reference_saddle",
    "resolve_params",
    "resolve_schedule",
    "run_algorithm",
    "PAIR_ALIASES",
    "PAIRS",
    "PairResult",
    "VerificationPair",
    "get_pair",
    "random_start",
    "verify_all",
    "verify_pair",
    "RATE_KINDS",
    "RateStudy",
    "checkpoints",
    "order_sweep",
    "rate_study",
]
