"""
MKSE Lab command-line front end.

Verbs:
    run                 one trajectory, its time series and bound report
    sweep               lambda or L sweep over seeds, aggregates and fits
    bounds              closed-form bounds for a grid of (lambda, L)
    check-inequalities  randomized inequality suite and slack probes

Exit codes: 0 ok, 2 config, grid or usage error, 3 blow-up or loss of
realness, 4 bound violation, 5 inequality violation.
"""

import argparse
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from analysis.analytic_bounds import BoundDomainError
from analysis.inequality_lab import (
    TOLERANCE,
    InequalityViolation,
    evaluate_check,
    minimize_slack,
    run_suite,
)
from analysis.observables import (
    ObservableSeries,
    ZeroEnergyError,
    crest_time_average,
    record,
    tail_stats,
)
from dynamics.mkse_solver import BlowUpError, SolverConfig, integrate
from spectral.fields import HermitianSymmetryError
from spectral.grid import GridError
from utils.config_loader import ConfigError, RunConfigFile, load_run_config, load_settings
from utils.file_utils import (
    create_run_metadata,
    run_directory_name,
    write_csv,
    write_json,
)
from utils.logger import (
    log_blow_up,
    log_bound_verdicts,
    log_run_complete,
    log_run_start,
    log_sweep_point,
    set_global_level,
    setup_logger,
)
from utils.plotting import plot_loglog
from utils.reports import (
    MARGIN_TOLERANCE,
    SCHEMA_VERSION,
    RunOutcome,
    SweepResult,
    aggregate_sweep,
    bound_only_sweep,
    build_bound_report,
)
from utils.table_format import bounds_table, dataframe_to_table


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOW_UP = 3
EXIT_BOUND = 4
EXIT_INEQUALITY = 5

logger = setup_logger("sweep_cli")


class BoundViolation(RuntimeError):
    """Raised when a gated bound fails; names every failing bound."""

    def __init__(self, label: str, names: list[str]):
        super().__init__(f"{label}: bound violated: {', '.join(names)}")
        self.names = names


def simulate(cfg: SolverConfig) -> tuple[ObservableSeries, float]:
    """
    Integrate one trajectory and record observables at every sample time.

    Returns:
        tuple: (series, wall time in seconds)
    """
    series = ObservableSeries()

    def observe(t, u_hat):
        series.append(record(u_hat, cfg.grid, t, cfg.refine))

    start = time.perf_counter()
    integrate(cfg, observe)
    return series, time.perf_counter() - start


def run_point(
    cfg: SolverConfig,
    run_dir: Path,
    formats: tuple[str, ...],
    version: str,
    value: float | None = None,
    margin_tolerance: float = MARGIN_TOLERANCE,
) -> RunOutcome:
    """
    Simulate one configuration and write its artifacts.

    Writes ``timeseries.csv`` (csv) and ``metadata.json`` plus
    ``bound_report.json`` (json) into ``run_dir``.

    Raises:
        BlowUpError: If the trajectory blows up
    """
    label = f"lambda={cfg.lam:g} L={cfg.grid.L:g} seed={cfg.seed}"
    log_run_start(logger, label, cfg.as_dict())
    try:
        series, wall_time = simulate(cfg)
    except BlowUpError as e:
        log_blow_up(logger, label, e)
        raise
    log_run_complete(logger, label, len(series), wall_time)

    report = build_bound_report(series, cfg, margin_tolerance)
    log_bound_verdicts(logger, label, [row.as_dict() for row in report.rows])
    if report.dissipation_ratio is not None:
        logger.info(f"{label}: J0(t_end)/J0(0) = {report.dissipation_ratio:.3e}")

    config_echo = cfg.as_dict()
    if "csv" in formats:
        write_csv(series.to_frame(), run_dir / "timeseries.csv")
    if "json" in formats:
        write_json(
            run_dir / "metadata.json",
            create_run_metadata(config_echo, version, wall_time, len(series)),
        )
        write_json(run_dir / "bound_report.json", report.to_document(config_echo))

    try:
        crest_avg = crest_time_average(series, cfg.transient)
    except ZeroEnergyError:
        crest_avg = math.nan
    return RunOutcome(
        value=cfg.lam if value is None else value,
        seed=cfg.seed,
        lam=cfg.lam,
        L=cfg.grid.L,
        limsup=tail_stats(series, cfg.transient).limsup_estimate,
        crest_avg=crest_avg,
        report=report,
    )


def _sweep_task(task: tuple) -> RunOutcome:
    cfg, run_dir, formats, version, value, margin_tolerance = task
    return run_point(cfg, run_dir, formats, version, value, margin_tolerance)


def _margin_tolerance(settings: dict) -> float:
    return float(settings.get("reports", {}).get("margin_tolerance", MARGIN_TOLERANCE))


def _output_options(args, config: RunConfigFile) -> tuple[Path, tuple[str, ...]]:
    out = Path(args.out) if args.out else config.output.directory
    formats = tuple(args.format) if args.format else config.output.formats
    return out, formats


def cmd_run(args, settings: dict) -> int:
    """Run one trajectory; exit 0 iff every gated bound passes."""
    config = load_run_config(args.config, settings)
    out, formats = _output_options(args, config)
    outcome = run_point(
        config.solver,
        out,
        formats,
        settings["app"]["version"],
        margin_tolerance=_margin_tolerance(settings),
    )

    if not outcome.report.passed:
        label = f"lambda={outcome.lam:g} seed={outcome.seed}"
        raise BoundViolation(label, [row.name for row in outcome.report.failures])
    return EXIT_OK


def _emit_sweep(result: SweepResult, out: Path, formats: tuple[str, ...], config: dict) -> None:
    parameter = result.parameter
    if "csv" in formats:
        write_csv(result.points, out / "sweep.csv")
    if "json" in formats:
        write_json(out / "sweep.json", result.to_document(config))
    if "svg" in formats:
        x = result.points[parameter].to_numpy()
        excess = {
            name: result.points[name].to_numpy()
            for name in ("crest_excess", "bound_crest_excess")
            if name in result.points
        }
        plot_loglog(x, excess, out / "crest_excess.svg", parameter, "crest factor - 1")
        bound_curves = {
            name: result.points[name].to_numpy()
            for name in ("J0_bound", "J1_bound", "sup_bound", "crest_avg_bound")
            if name in result.points
        }
        plot_loglog(x, bound_curves, out / "bounds.svg", parameter, "bound")
    for name, fit in result.fits.items():
        logger.info(
            f"Fit {name} ~ {parameter}^{fit.exponent:.4f} "
            f"(prefactor {fit.prefactor:.4g}, r^2 {fit.r_squared:.4f})"
        )


def cmd_sweep(args, settings: dict) -> int:
    """
    Run every (value, seed) point of the sweep section.

    Results are merged in (value, seed) order whatever the worker count.
    """
    config = load_run_config(args.config, settings)
    if config.sweep is None:
        raise ConfigError("sweep", "section missing")
    out, formats = _output_options(args, config)
    sweep = config.sweep
    solver = config.solver
    echo = {"document": config.document, "base": solver.as_dict()}

    if args.bound_only:
        result = bound_only_sweep(
            sweep.parameter, solver.grid.d, sweep.values, solver.lam, solver.grid.L
        )
        _emit_sweep(result, out, formats, echo)
        return EXIT_OK

    version = settings["app"]["version"]
    margin_tolerance = _margin_tolerance(settings)
    points = sorted((value, seed) for value in sweep.values for seed in sweep.seeds)
    tasks = [
        (
            config.with_point(value, seed),
            out / "runs" / run_directory_name(sweep.parameter, value, seed),
            formats,
            version,
            value,
            margin_tolerance,
        )
        for value, seed in points
    ]
    workers = args.workers or settings.get("performance", {}).get("workers", 1)
    logger.info(f"Sweeping {sweep.parameter} over {len(tasks)} points with {workers} workers")

    outcomes = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_task, task) for task in tasks]
            for (value, seed), future in zip(points, futures, strict=True):
                outcomes.append(_collect(sweep.parameter, value, seed, future.result))
    else:
        for (value, seed), task in zip(points, tasks, strict=True):
            outcomes.append(_collect(sweep.parameter, value, seed, partial(_sweep_task, task)))

    result = aggregate_sweep(sweep.parameter, solver.grid.d, outcomes)
    _emit_sweep(result, out, formats, echo)

    failures = [
        f"{sweep.parameter}={outcome.value:g} seed={outcome.seed} "
        f"({', '.join(row.name for row in outcome.report.failures)})"
        for outcome in outcomes
        if not outcome.report.passed
    ]
    if failures:
        raise BoundViolation("sweep", failures)
    return EXIT_OK


def _collect(parameter: str, value: float, seed: int, fetch) -> RunOutcome:
    try:
        outcome = fetch()
    except BlowUpError as e:
        log_sweep_point(logger, parameter, value, seed, f"blow-up at t={e.time:.6g}")
        raise BlowUpError(
            e.time, e.max_abs_coeff, label=f"{parameter}={value:g} seed={seed}"
        ) from e
    log_sweep_point(logger, parameter, value, seed, "pass" if outcome.report.passed else "fail")
    return outcome


def cmd_bounds(args, settings: dict) -> int:
    """Print every bound for the Cartesian product of lambda and L values."""
    table = bounds_table(args.d, args.lambdas, args.sides)
    print("\n".join(dataframe_to_table(table)))
    if args.csv:
        write_csv(table, Path(args.csv))
    return EXIT_OK


def cmd_check_inequalities(args, settings: dict) -> int:
    """
    Run the randomized suite, then the slack probes, and write a summary.

    Raises:
        InequalityViolation: For the first violated check, naming its seed
    """
    suite_settings = settings.get("inequality_suite", {})
    seeds = args.seeds if args.seeds is not None else suite_settings.get("seeds", 1000)
    budget = args.budget if args.budget is not None else suite_settings.get("probe_budget", 0)
    tol = suite_settings.get("tolerance", TOLERANCE)
    if seeds < 1:
        raise ConfigError("inequality_suite.seeds", f"must be >= 1, got {seeds}")
    if budget < 0:
        raise ConfigError("inequality_suite.probe_budget", f"must be >= 0, got {budget}")
    workers = args.workers or settings.get("performance", {}).get("workers", 1)

    summaries = run_suite(range(seeds), tol=tol, workers=workers)
    checks = []
    for summary in summaries:
        entry = {
            "name": summary.name,
            "evaluated": summary.evaluated,
            "violations": list(summary.violations),
            "min_relative_slack": summary.min_relative_slack,
            "worst_seed": summary.worst_seed,
        }
        logger.info(
            f"{summary.name}: min relative slack {summary.min_relative_slack:.3e} "
            f"(seed {summary.worst_seed})"
        )
        checks.append(entry)

    out = Path(args.out) if args.out else Path(settings["defaults"]["output"]["directory"])
    document = {
        "schema_version": SCHEMA_VERSION,
        "seeds": seeds,
        "tolerance": tol,
        "probe_budget": budget,
        "checks": checks,
    }
    violated = [summary for summary in summaries if summary.violations]
    if violated:
        write_json(out / "inequality_summary.json", document)
        first = violated[0]
        result = evaluate_check(first.name, first.violations[0])
        raise InequalityViolation(first.name, first.violations[0], result.lhs, result.rhs)

    if budget > 0:
        probe_seed = suite_settings.get("probe_seed", 0)
        for entry in checks:
            try:
                best = minimize_slack(entry["name"], budget, probe_seed)
            except InequalityViolation:
                write_json(out / "inequality_summary.json", document)
                raise
            entry["probe_best_ratio"] = best.ratio
            entry["probe_origin"] = best.field_descriptor["origin"]
            logger.info(f"{entry['name']}: best probed ratio {best.ratio:.9g}")
    else:
        logger.info("Probe budget is 0; skipping slack probes")

    write_json(out / "inequality_summary.json", document)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkse-lab",
        description="Simulate the modified Kuramoto-Sivashinsky equation and check its bounds.",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--settings", help="settings file (default: config.yaml)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(sub):
        sub.add_argument("--out", help="output directory (overrides output.directory)")
        sub.add_argument(
            "--format",
            action="append",
            choices=["csv", "json", "svg"],
            help="artifact format, repeatable (overrides output.formats)",
        )

    run = subparsers.add_parser("run", help="simulate one configuration")
    run.add_argument("--config", required=True, help="run-config YAML")
    add_output_flags(run)
    run.set_defaults(handler=cmd_run)

    sweep = subparsers.add_parser("sweep", help="sweep lambda or L over seeds")
    sweep.add_argument("--config", required=True, help="run-config YAML with a sweep section")
    sweep.add_argument("--workers", type=int, help="process pool size")
    sweep.add_argument(
        "--bound-only", action="store_true", help="evaluate bound curves without simulating"
    )
    add_output_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    bounds = subparsers.add_parser("bounds", help="print closed-form bounds")
    bounds.add_argument("--d", type=int, choices=[1, 2], required=True)
    bounds.add_argument("--lambda", dest="lambdas", type=float, nargs="+", required=True)
    bounds.add_argument("--L", dest="sides", type=float, nargs="+", default=[2.0 * math.pi])
    bounds.add_argument("--csv", help="also write the table as CSV")
    bounds.set_defaults(handler=cmd_bounds)

    check = subparsers.add_parser(
        "check-inequalities", help="randomized inequality suite and slack probes"
    )
    check.add_argument("--seeds", type=int, help="fields per check")
    check.add_argument("--budget", type=int, help="evaluations per slack probe, 0 skips")
    check.add_argument("--workers", type=int, help="process pool size")
    check.add_argument("--out", help="directory for inequality_summary.json")
    check.set_defaults(handler=cmd_check_inequalities)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args.settings)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    logging_settings = settings.get("logging", {})
    set_global_level(
        args.log_level or logging_settings.get("level", "INFO"),
        fmt=logging_settings.get("format"),
    )

    try:
        return args.handler(args, settings)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundDomainError as e:
        logger.error(f"Bound outside its domain: {e}")
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as e:
        print(f"blow-up: {e}", file=sys.stderr)
        return EXIT_BLOW_UP
    except HermitianSymmetryError as e:
        logger.error(f"State is no longer real: {e}")
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_BLOW_UP
    except GridError as e:
        logger.error(f"Invalid grid: {e}")
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundViolation as e:
        logger.error(str(e))
        print(str(e), file=sys.stderr)
        return EXIT_BOUND
    except InequalityViolation as e:
        logger.error(str(e))
        print(str(e), file=sys.stderr)
        return EXIT_INEQUALITY


if __name__ == "__main__":
    sys.exit(main())
