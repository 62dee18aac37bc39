"""Main CLI entry point for the ALM / ADMM / DRS splitting suite."""

import click

from ..utils.logger import configure_logging
from .commands import (
    algorithms_command,
    classify_command,
    rate_study_command,
    run_command,
    sweep_command,
    verify_command,
)


LOG_LEVELS = click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False)


@click.group()
@click.version_option(version="0.1.0")
@click.option("--log-level", type=LOG_LEVELS, default=None,
              help="Log level (default: ALM_LOG_LEVEL or WARNING)")
@click.option("--log-file/--no-log-file", default=None, help="Also log to ./logs")
def cli(log_level, log_file):
    """Balanced ALM splitting suite.

    Runs the ALM, ADMM and DRS family on linearly constrained convex problems,
    checks the iterate equivalences between them and measures ergodic rates.
    """
    configure_logging(level=log_level, log_to_file=log_file, force=True)


@cli.command()
@click.argument("config", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--problem", "-p", help="Problem file or catalog name")
@click.option("--algorithm", "-a", help="Algorithm name or scheme:<order>")
@click.option("--iterations", "-k", type=int, help="Iterations K")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV trace path")
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE", help="Solver parameter")
@click.pass_context
def run(ctx, config, problem, algorithm, iterations, output, params):
    """Run one algorithm from CONFIG or from options."""
    ctx.exit(run_command(config, problem, algorithm, iterations, output, params))


@cli.command()
@click.argument("pairs", nargs=-1)
@click.option("--problem", "-p", default="quadratic", show_default=True,
              help="Problem file or catalog name")
@click.option("--iterations", "-k", type=int, default=200, show_default=True)
@click.option("--tol", type=float, default=None, help="Override the pair tolerance")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the random start")
@click.option("--show-deviations", type=int, default=0, metavar="N",
              help="Print the first N per-k deviations of each pair")
@click.pass_context
def verify(ctx, pairs, problem, iterations, tol, seed, show_deviations):
    """Check iterate equivalences (all registered PAIRS when none are given)."""
    ctx.exit(verify_command(pairs, problem, iterations, tol, seed, show_deviations))


@cli.command("sweep-orders")
@click.option("--problem", "-p", default="quadratic", show_default=True)
@click.option("--iterations", "-k", type=int, default=5000, show_default=True)
@click.option("--workers", "-w", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE", help="beta1, beta2, r or delta")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV output path")
@click.option("--tol", type=float, default=None, help="Fail when an order ends farther than tol")
@click.pass_context
def sweep_orders(ctx, problem, iterations, workers, params, output, tol):
    """Run all 24 update orders of the five-block scheme."""
    ctx.exit(sweep_command(problem, iterations, workers, params, output, tol))


@cli.command("rate-study")
@click.option("--problem", "-p", default="quadratic", show_default=True)
@click.option("--algorithm", "-a", default="balanced_alm", show_default=True,
              type=click.Choice(["balanced_alm", "dual_primal_alm", "accel_balanced", "accel_dual_primal"]))
@click.option("--iterations", "-k", type=int, default=2000, show_default=True)
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE", help="r or delta")
@click.option("--schedule", default=None,
              type=click.Choice(["constant", "mu_linear", "paper_linear", "linear"]),
              help="Schedule of the accelerated methods (default: mu_linear, alias paper_linear)")
@click.option("--r", "r", type=float, default=None, help="Constant schedule value")
@click.option("--r0", type=float, default=None, help="Linear schedule start")
@click.option("--slope", type=float, default=1.0, show_default=True, help="Linear schedule slope")
@click.option("--delta-prime", type=float, default=1.0, show_default=True)
@click.option("--spot-checks", type=int, default=0, show_default=True,
              help="Random reference pairs at which the bound is also checked")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="CSV output path")
@click.pass_context
def rate_study(ctx, problem, algorithm, iterations, params, schedule, r, r0, slope, delta_prime,
               spot_checks, output):
    """Ergodic gap versus K, the matching bound, and the fitted slope."""
    sched = None
    if schedule:
        sched = {"type": schedule, "r": r, "r0": r0, "slope": slope, "delta_prime": delta_prime}
    ctx.exit(rate_study_command(problem, algorithm, iterations, params, sched, spot_checks, output))


@cli.command()
@click.argument("order")
@click.pass_context
def classify(ctx, order):
    """Print the equivalence class of ORDER, e.g. u-xbar-v-lambda-ybar."""
    ctx.exit(classify_command(order))


@cli.command()
@click.pass_context
def algorithms(ctx):
    """List registered algorithms, their parameters and default K."""
    ctx.exit(algorithms_command())


if __name__ == "__main__":
    cli()
