"""Generic iteration driver with divergence detection."""

import time
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..diagnostics.trace import Trace, TraceRow, build_trace
from ..exceptions import ParameterError, divergence_error
from ..utils.logger import get_logger, log_run_summary


logger = get_logger(__name__)

S = TypeVar("S")
Pair = Tuple[np.ndarray, np.ndarray]


def iterate(step: Callable[[S], S], init: S, iterations: int, algorithm: str = "") -> List[S]:
    """Apply ``step`` repeatedly and return the states 0..iterations.

    Raises:
        ParameterError: iterations < 0
        DivergenceError: a state contains a non-finite entry
    """
    if iterations < 0:
        raise ParameterError("iterations must be nonnegative", context={"iterations": iterations})
    states = [init]
    state = init
    for k in range(1, iterations + 1):
        state = step(state)
        if not state.is_finite():
            raise divergence_error(algorithm or "solver", k, state.non_finite_field())
        states.append(state)
    return states


def run_states(
    step: Callable[[S], S],
    problem,
    init: S,
    iterations: int,
    extract_all: Callable[[Sequence[S]], List[Pair]],
    lookahead: int = 0,
    algorithm: str = "",
) -> Tuple[Trace, List[S]]:
    """Run iterations + lookahead steps and record rows k = 0..iterations.

    Args:
        extract_all: States → (x^k, λ^k) list; may need state k + lookahead for row k
        lookahead: Extra steps the extractor consumes beyond the last row

    Returns:
        (trace, states)
    """
    if iterations < 1:
        raise ParameterError("iterations must be at least 1", context={"iterations": iterations})
    started = time.perf_counter()
    states = iterate(step, init, iterations + lookahead, algorithm)
    pairs = extract_all(states)[:iterations + 1]
    trace = build_trace(problem, pairs, algorithm=algorithm)
    log_run_summary(
        logger, algorithm or "solver", iterations, trace.final.primal_residual,
        duration_ms=(time.perf_counter() - started) * 1000.0,
    )
    return trace, states


def run(
    step: Callable[[S], S],
    problem,
    init: S,
    iterations: int,
    trace_sink: Optional[Callable[[TraceRow], None]] = None,
    extract: Callable[[S], Pair] = lambda s: s.pair(),
    algorithm: str = "",
) -> Trace:
    """Run ``iterations`` steps and record rows k = 0..iterations.

    Args:
        step: State → state map (usually a functools.partial of a *_step function)
        problem: The ConvexProblem being solved
        init: Initial state
        iterations: Number of steps K ≥ 1
        trace_sink: Optional callback receiving each row as it is recorded
        extract: State → (x, λ) used for the trace columns
        algorithm: Label for logs and errors
    """
    trace, _ = run_states(step, problem, init, iterations,
                          lambda states: [extract(s) for s in states], algorithm=algorithm)
    if trace_sink is not None:
        for row in trace:
            trace_sink(row)
    return trace
