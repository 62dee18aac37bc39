"""CLI command implementations for the splitting solver suite.

Each command returns a process exit code: 0 on success, 1 for configuration
and input errors, 2 on divergence, 3 when a verification does not hold.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..config import ConfigLoader, ScheduleConfig, SolverParams
from ..exceptions import ConfigurationError, DivergenceError, SolverError, VerificationError
from ..experiments import (
    ALGORITHM_REGISTRY,
    PAIRS,
    order_sweep,
    rate_study,
    run_algorithm,
    verify_pair,
)
from ..experiments.registry import SCHEME_INFO
from ..solvers import UpdateOrder, classify_order
from ..utils.logger import get_logger, log_error_with_context


logger = get_logger(__name__)

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGENCE = 2
EXIT_VERIFICATION = 3


def exit_code_for(error: SolverError) -> int:
    if isinstance(error, DivergenceError):
        return EXIT_DIVERGENCE
    if isinstance(error, VerificationError):
        return EXIT_VERIFICATION
    return EXIT_CONFIG


def report_error(error: SolverError, command: str) -> int:
    """Print the error to stderr, log it and map it to an exit code."""
    code = exit_code_for(error)
    label = {EXIT_DIVERGENCE: "Divergence", EXIT_VERIFICATION: "Verification failed"}.get(code, "Error")
    err_console.print(f"[red]{label}:[/red] {error}")
    log_error_with_context(logger, error, {"command": command, **error.context})
    return code


def parse_param_overrides(pairs: Iterable[str]) -> Dict[str, float]:
    """Turn ``key=value`` strings into a parameter dict.

    Raises:
        ConfigurationError: malformed pair or non-numeric value
    """
    params: Dict[str, float] = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError("Parameters must be given as key=value", context={"param": item})
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ConfigurationError("Parameter value is not a number",
                                     context={"param": key.strip(), "value": value}) from None
    return params


def run_command(
    config_path: Optional[str] = None,
    problem: Optional[str] = None,
    algorithm: Optional[str] = None,
    iterations: Optional[int] = None,
    output: Optional[str] = None,
    params: Sequence[str] = (),
) -> int:
    """Run one algorithm and write its trace as CSV.

    Options given on the command line override the config file.
    """
    try:
        loader = ConfigLoader()
        raw: Dict[str, Any] = {}
        if config_path:
            raw = loader.load_experiment(config_path).model_dump(exclude_none=True)
        if problem:
            raw["problem"] = problem
        if algorithm:
            raw["algorithm"] = algorithm
        if iterations is not None:
            raw["iterations"] = iterations
        if output:
            raw["output"] = output
        overrides = parse_param_overrides(params)
        if overrides:
            raw["params"] = {**raw.get("params", {}), **overrides}
        if "problem" not in raw or "algorithm" not in raw:
            raise ConfigurationError("Give a config file or both --problem and --algorithm")
        config = loader.validate_experiment(raw)
        instance = loader.load_problem(config.problem)
        result = run_algorithm(config.algorithm, instance, params=config.params,
                               iterations=config.iterations, schedule=config.schedule)
    except SolverError as e:
        return report_error(e, "run")

    final = result.trace.final
    table = Table(title=f"{result.name} on {instance.name}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("iterations", str(result.iterations))
    table.add_row("objective", f"{final.objective:.10g}")
    table.add_row("primal residual", f"{final.primal_residual:.3e}")
    for key, value in result.params.items():
        table.add_row(key, f"{value:g}")
    if result.order_class is not None:
        table.add_row("class", result.order_class.value)
    console.print(table)

    if config.output:
        result.trace.to_csv(config.output)
        console.print(f"[green]Trace written to {config.output}[/green]")
    return EXIT_OK


def verify_command(
    pairs: Sequence[str],
    problem: str = "quadratic",
    iterations: int = 200,
    tol: Optional[float] = None,
    seed: int = 0,
    show_deviations: int = 0,
) -> int:
    """Run verification pairs; all registered pairs when none are named."""
    names = list(pairs) or list(PAIRS)
    try:
        instance = ConfigLoader().load_problem(problem)
        results = [verify_pair(name, instance, iterations, tol=tol, seed=seed) for name in names]
    except SolverError as e:
        return report_error(e, "verify")

    table = Table(title=f"Verification on {instance.name} (K = {iterations})")
    table.add_column("Pair", style="cyan")
    table.add_column("Result")
    table.add_column("Max deviation", justify="right")
    for result in results:
        style = "green" if result.passed else "red"
        table.add_row(result.pair, f"[{style}]{result.describe()}[/{style}]",
                      f"{result.report.max_deviation:.3e}")
    console.print(table)

    if show_deviations:
        for result in results:
            rows = Table(title=f"{result.pair}: deviation per k")
            rows.add_column("k", justify="right")
            rows.add_column("deviation", justify="right")
            for k, dev in enumerate(result.report.deviations[:show_deviations]):
                rows.add_row(str(k), f"{dev:.3e}")
            console.print(rows)

    failed = [r.pair for r in results if not r.passed]
    if failed:
        return report_error(VerificationError("Pairs did not verify",
                                              context={"pairs": ", ".join(failed)}), "verify")
    return EXIT_OK


def sweep_command(
    problem: str = "quadratic",
    iterations: int = 5000,
    workers: int = 1,
    params: Sequence[str] = (),
    output: Optional[str] = None,
    tol: Optional[float] = None,
) -> int:
    """Run the 24 orders and print class, final error and residual per order."""
    try:
        instance = ConfigLoader().load_problem(problem)
        overrides = SolverParams(**parse_param_overrides(params))
        frame = order_sweep(instance, iterations=iterations, params=overrides, workers=workers)
    except SolverError as e:
        return report_error(e, "sweep-orders")
    except ValueError as e:
        return report_error(ConfigurationError("Invalid parameters", context={"error": str(e)}),
                            "sweep-orders")

    table = Table(title=f"Order sweep on {instance.name} (K = {iterations})")
    for column, style in (("order", "cyan"), ("class", "magenta"), ("x_error", None),
                          ("lambda_error", None), ("residual", None)):
        table.add_column(column, style=style, justify="left" if style else "right")
    for row in frame.to_dict("records"):
        table.add_row(row["order"], row["class"], f"{row['x_error']:.3e}",
                      f"{row['lambda_error']:.3e}", f"{row['residual']:.3e}")
    console.print(table)

    if output:
        frame.to_csv(output, index=False, float_format="%.17g")
        console.print(f"[green]Sweep written to {output}[/green]")
    if tol is not None:
        far = frame.loc[frame["x_error"] > tol, "order"].tolist()
        if far:
            return report_error(VerificationError("Orders did not reach the saddle point",
                                                  context={"tol": tol, "orders": ", ".join(far)}),
                                "sweep-orders")
    return EXIT_OK


def rate_study_command(
    problem: str = "quadratic",
    algorithm: str = "balanced_alm",
    iterations: int = 2000,
    params: Sequence[str] = (),
    schedule: Optional[Dict[str, Any]] = None,
    spot_checks: int = 0,
    output: Optional[str] = None,
) -> int:
    """Gap table at checkpoints, bound check and fitted slope."""
    try:
        instance = ConfigLoader().load_problem(problem)
        overrides = SolverParams(**parse_param_overrides(params))
        sched = ScheduleConfig(**schedule) if schedule else None
        study = rate_study(instance, algorithm, iterations=iterations, params=overrides,
                           schedule=sched, spot_checks=spot_checks)
    except SolverError as e:
        return report_error(e, "rate-study")
    except ValueError as e:
        return report_error(ConfigurationError("Invalid rate-study options", context={"error": str(e)}),
                            "rate-study")

    table = Table(title=f"{study.algorithm} on {study.problem}: ergodic gap")
    table.add_column("K", justify="right")
    table.add_column("gap", justify="right")
    table.add_column("bound", justify="right")
    table.add_column("bound_ok")
    for row in study.table.itertuples(index=False):
        table.add_row(str(row.K), f"{row.gap:.3e}", f"{row.bound:.3e}",
                      "[green]yes[/green]" if row.bound_ok else "[red]no[/red]")
    console.print(table)
    slope = "n/a (gap vanished in window)" if study.slope is None else f"{study.slope:.3f}"
    console.print(Panel.fit(
        f"Fitted slope: [bold]{slope}[/bold]\n"
        f"Bound constant: {study.check.constant:.6g}\n"
        f"Violations: {len(study.check.violations)} (spot checks: {study.spot_violations})",
        title="Rate study"
    ))

    if output:
        study.table.to_csv(output, index=False, float_format="%.17g")
        console.print(f"[green]Table written to {output}[/green]")
    if not study.bound_ok:
        first = study.check.violations[0] if study.check.violations else None
        return report_error(VerificationError("Rate bound violated",
                                              context={"algorithm": algorithm, "first_K": first,
                                                       "spot_violations": study.spot_violations}),
                            "rate-study")
    return EXIT_OK


def classify_command(order: str) -> int:
    """Print the equivalence class of an update order."""
    try:
        parsed = UpdateOrder.parse(order)
        label = classify_order(parsed)
    except SolverError as e:
        return report_error(e, "classify")
    console.print(f"{parsed}: [bold]{label.value}[/bold]")
    return EXIT_OK


def algorithms_command() -> int:
    """List registered algorithms with their parameters and default K."""
    table = Table(title="Registered algorithms")
    table.add_column("Name", style="cyan")
    table.add_column("Parameters", style="magenta")
    table.add_column("Default K", justify="right")
    table.add_column("Description")
    for info in (*ALGORITHM_REGISTRY.values(), SCHEME_INFO):
        table.add_row(info.name, ", ".join(info.parameters), str(info.default_iterations),
                      info.description)
    console.print(table)
    return EXIT_OK
