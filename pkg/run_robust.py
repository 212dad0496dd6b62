#!/usr/bin/env python3
# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# run_robust.py - 메인 실행 스크립트
# ==============================================================================

"""
Main script to run robustport v1.0.
Can be run directly or installed as the `robustport` console command.

Exit codes: 0 success, 1 configuration or input error, 2 numerical
failure, 3 no admissibility witness (check only).
"""

import argparse
import logging
import sys
import warnings

from robustport import (
    CalibrationError,
    ConfigError,
    DomainError,
    NumericalFailure,
    NumericalWarning,
    PriceParseError,
    configure_logging,
    load_run_config,
)
from robustport import commands
from robustport.config import DEFAULT_DELTA_YEARS, DEFAULT_LOG_LEVEL, SWEEP_Y_POINTS, __version__
from robustport.enums import DriftMode, ExitCode, OutputFormat, QuadratureRule, StrategyKind, SweepParameter

logger = logging.getLogger("robustport.run")

# argparse destination -> dotted RunConfig key
OVERRIDES = {
    "r": "market.r", "sigma": "market.sigma", "T": "market.T", "k": "market.k", "a": "market.a",
    "y0": "prior.y0", "sigma0_sq": "prior.sigma0_sq",
    "quad_nodes": "quadrature.n_time_nodes", "quad_rule": "quadrature.rule",
    "n_paths": "scenario.n_paths", "n_steps": "scenario.n_steps", "seed": "scenario.seed",
    "drift_mode": "scenario.drift_mode", "fixed_mu": "scenario.fixed_mu",
    "initial_wealth": "scenario.initial_wealth", "workers": "scenario.n_workers",
    "output_dir": "output_dir", "output_format": "output_format",
}
GRID_FIELDS = ("y_min", "y_max", "n_y", "n_t", "theta")


def build_parser():
    """Argument parser with one subcommand per workflow."""
    parser = argparse.ArgumentParser(
        prog="robustport",
        description="Robust portfolio selection with drift learning (robustport v%s)" % __version__,
    )
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--log-level", default=DEFAULT_LOG_LEVEL, help="Logging level (default: %(default)s)")
    parser.add_argument("--quiet", action="store_true", help="Only print errors")

    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("overrides")
    for name in ("r", "sigma", "T", "k", "a", "y0"):
        group.add_argument(f"--{name}", type=float, dest=name)
    group.add_argument("--sigma0-sq", type=float, dest="sigma0_sq")
    group.add_argument("--y-min", type=float, dest="y_min")
    group.add_argument("--y-max", type=float, dest="y_max")
    group.add_argument("--n-y", type=int, dest="n_y")
    group.add_argument("--n-t", type=int, dest="n_t")
    group.add_argument("--theta", type=float)
    group.add_argument("--quad-nodes", type=int, dest="quad_nodes")
    group.add_argument("--quad-rule", choices=[rule.value for rule in QuadratureRule], dest="quad_rule")
    group.add_argument("--output-dir", dest="output_dir")
    group.add_argument("--format", choices=[fmt.value for fmt in OutputFormat], dest="output_format")

    sub = parser.add_subparsers(dest="command", required=True)

    estimate = sub.add_parser("estimate", parents=[common], help="Calibrate from a date,close CSV")
    estimate.add_argument("prices", help="Price CSV with a date,close header")
    estimate.add_argument("--delta-years", type=float, default=DEFAULT_DELTA_YEARS)

    sub.add_parser("solve", parents=[common], help="Finite-difference surface and trading regions")

    strategy_at = sub.add_parser("strategy-at", parents=[common], help="Robust feedback at one point")
    strategy_at.add_argument("--t", type=float, required=True, dest="at_t")
    strategy_at.add_argument("--y", type=float, required=True, dest="at_y")
    strategy_at.add_argument("--backend", choices=["fd", "quadrature"], default="fd")

    sweep = sub.add_parser("sweep", parents=[common], help="Sensitivity of pi*(0) to one parameter")
    sweep.add_argument("--parameter", choices=[p.value for p in SweepParameter], required=True)
    sweep.add_argument("--values", type=float, nargs="+", required=True)
    sweep.add_argument("--y-points", type=float, nargs="+", default=list(SWEEP_Y_POINTS))

    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo strategy comparison")
    simulate.add_argument("--n-paths", type=int, dest="n_paths")
    simulate.add_argument("--n-steps", type=int, dest="n_steps")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--drift-mode", choices=[m.value for m in DriftMode], dest="drift_mode")
    simulate.add_argument("--fixed-mu", type=float, dest="fixed_mu")
    simulate.add_argument("--initial-wealth", type=float, dest="initial_wealth")
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--keep-paths", action="store_true")
    simulate.add_argument("--strategies", nargs="+", choices=[k.value for k in StrategyKind],
                          default=[k.value for k in commands.DEFAULT_STRATEGIES])
    simulate.add_argument("--check-refinement", action="store_true")

    check = sub.add_parser("check", parents=[common], help="Admissibility witness search")
    check.add_argument("--budget", type=int)

    export = sub.add_parser("export-surface", parents=[common], help="Write a surface from either backend")
    export.add_argument("--backend", choices=["fd", "quadrature"], default="fd")
    return parser


def collect_overrides(args):
    """Dotted-key overrides from the parsed arguments; unset flags are skipped."""
    values = vars(args)
    overrides = {key: values.get(dest) for dest, key in OVERRIDES.items() if values.get(dest) is not None}
    if values.get("keep_paths"):
        overrides["scenario.keep_paths"] = True
    grid = {name: values[name] for name in GRID_FIELDS if values.get(name) is not None}
    if grid:
        overrides.update({f"grid.{name}": value for name, value in grid.items()})
    return overrides


def dispatch(args, cfg):
    """Run the selected subcommand; returns (CommandOutput, exit code)."""
    if args.command == "estimate":
        return commands.run_estimate(args.prices, args.delta_years, cfg), ExitCode.SUCCESS
    if args.command == "solve":
        return commands.run_solve(cfg), ExitCode.SUCCESS
    if args.command == "strategy-at":
        return commands.run_strategy_at(cfg, args.at_t, args.at_y, args.backend), ExitCode.SUCCESS
    if args.command == "sweep":
        return commands.run_sweep(cfg, args.parameter, args.values, tuple(args.y_points)), ExitCode.SUCCESS
    if args.command == "simulate":
        output = commands.run_simulate(cfg, args.strategies, args.check_refinement)
        return output, ExitCode.SUCCESS
    if args.command == "check":
        output = commands.run_check(cfg, args.budget)
        return output, ExitCode.SUCCESS if output.result.found else ExitCode.NOT_ADMISSIBLE
    return commands.run_export_surface(cfg, args.backend), ExitCode.SUCCESS


def main(argv=None):
    """Main function with command line argument parsing."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("ERROR" if args.quiet else args.log_level)
    warnings.simplefilter("always", NumericalWarning)

    try:
        cfg = load_run_config(args.config, collect_overrides(args))
        output, code = dispatch(args, cfg)
    except (ConfigError, PriceParseError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.CONFIG_ERROR.value
    except (NumericalFailure, DomainError) as exc:
        stage = getattr(exc, "stage", None)
        print(f"numerical failure{f' in {stage}' if stage else ''}: {exc}", file=sys.stderr)
        return ExitCode.NUMERICAL_FAILURE.value
    except KeyboardInterrupt:
        print("\ninterrupted by user.", file=sys.stderr)
        return ExitCode.NUMERICAL_FAILURE.value

    if not args.quiet:
        print(output.report, end="")
        for path in output.files:
            print(f"wrote {path}")
    return code.value


if __name__ == "__main__":
    sys.exit(main())
