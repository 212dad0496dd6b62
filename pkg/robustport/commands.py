# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# commands.py - 하위 명령 실행
# ==============================================================================

"""
Subcommand bodies for robustport v1.0
Each run_* function takes a RunConfig, orchestrates the numerical modules,
writes its files under cfg.output_dir and returns what it produced so the
runner (and tests) can report on it.
"""

import logging
import math
from dataclasses import dataclass, replace

import pandas as pd

from .agents import build_agents
from .analysis import (
    admissibility_frame,
    admissibility_report,
    decision_report,
    estimate_report,
    output_path,
    region_frame,
    simulation_frame,
    surface_frame,
    terminal_wealth_frame,
    write_frame,
)
from .analytic_oracles import fy_quadrature, merton_strategy, partial_info_strategy, tabulate_surface
from .config import GRID_HALF_WIDTH_STD, SWEEP_Y_POINTS
from .data_loader import estimate_params, load_price_csv
from .enums import DriftMode, StrategyKind, SweepParameter
from .errors import RobustPortError
from .hjbi import band_half_width
from .pde_engine import solve_f, surface_lookup
from .simulator import simulate, utility_report
from .strategy import admissibility_lhs, check_admissibility, classify_regions, robust_feedback

logger = logging.getLogger(__name__)

REFERENCE_WITNESS = (1.1, 2.0, 1.0)  # delta1, delta7 (= delta8), epsilon3
DEFAULT_STRATEGIES = (StrategyKind.Robust, StrategyKind.PartialInfo, StrategyKind.Merton)


@dataclass(frozen=True)
class CommandOutput:
    """Files written by a command, the text to print and the primary result object."""

    files: tuple
    report: str = ""
    result: object = None


def _belief_range(prior):
    half = GRID_HALF_WIDTH_STD * prior.sigma0
    return prior.y0 - half, prior.y0 + half


def run_estimate(price_path, delta_years, cfg=None):
    """Calibrate sigma, y0 and sigma0^2 from a price file; writes estimates when cfg is given."""
    series = load_price_csv(price_path, delta_years)
    sigma_hat, y0_hat, sigma0_sq_hat = estimate_params(series)
    a = cfg.market.a if cfg is not None else None
    report = estimate_report(sigma_hat, y0_hat, sigma0_sq_hat, len(series), a)
    files = ()
    if cfg is not None:
        frame = pd.DataFrame([{"sigma": sigma_hat, "y0": y0_hat, "sigma0_sq": sigma0_sq_hat,
                               "n_prices": len(series), "delta_years": delta_years}])
        files = (write_frame(frame, output_path(cfg, "estimates"), cfg.output_format),)
    return CommandOutput(files, report, (sigma_hat, y0_hat, sigma0_sq_hat))


def region_rows(params, prior, surface):
    """Region boundaries (y_low, band, inner crossing, y_high) for every time row with t < T."""
    rows = []
    for t in surface.times[:-1]:
        regions = classify_regions(params, prior, t, surface)
        c = band_half_width(params, prior, t)
        if len(regions) == 2:
            crossing = regions[0].upper
            rows.append((t, crossing, params.r - c, crossing, params.r + c, crossing))
        else:
            small = regions[1]
            rows.append((t, small.lower, params.r - c, small.interior_points[0], params.r + c, small.upper))
    return rows


def run_solve(cfg):
    """Finite-difference surface plus region boundary curves."""
    params, prior = cfg.market, cfg.prior
    surface = solve_f(params, prior, cfg.resolved_grid(), cfg.quadrature)
    surface_file = write_frame(surface_frame(params, prior, surface), output_path(cfg, "surface"),
                               cfg.output_format)
    regions = region_rows(params, prior, surface)
    region_file = write_frame(region_frame(regions), output_path(cfg, "regions"), cfg.output_format)
    report = "".join(f"warning: {note}\n" for note in surface.warnings)
    report += f"surface: {surface.times.size} x {surface.states.size} nodes\n"
    if regions:
        t0 = regions[0]
        report += f"t=0 regions: Sell < {t0[1]:.10f} < SmallTrade < {t0[5]:.10f} < Buy\n"
    return CommandOutput((surface_file, region_file), report, surface)


def run_strategy_at(cfg, t, y, backend="fd"):
    """StrategyDecision at one point, with f_y from the FD surface or the quadrature oracle."""
    params, prior = cfg.market, cfg.prior
    if backend == "fd":
        surface = solve_f(params, prior, cfg.resolved_grid(y_range=(y, y)), cfg.quadrature)
        f_y = surface_lookup(surface, t, y)[1]
    elif prior.degenerate:
        f_y = 0.0
    else:
        f_y = fy_quadrature(params, prior, t, y, cfg.quadrature)
    decision = robust_feedback(params, prior, t, y, f_y)
    return CommandOutput((), decision_report(decision, backend), decision)


def _sweep_case(cfg, parameter, value):
    if parameter is SweepParameter.a:
        return replace(cfg.market, a=value), cfg.prior
    if parameter is SweepParameter.sigma:
        return replace(cfg.market, sigma=value), cfg.prior
    return cfg.market, replace(cfg.prior, sigma0_sq=value)


def sweep_table(cfg, parameter, values, y_points=SWEEP_Y_POINTS):
    """
    pi*(0) with its partial-information and Merton references per (value, y).

    At t = 0 the belief equals the prior mean, so every y point is used as y0.
    Invalid values yield a row carrying the error and the sweep continues.
    """
    parameter = SweepParameter(parameter)
    rows = []
    for value in values:
        try:
            params, prior = _sweep_case(cfg, parameter, float(value))
        except RobustPortError as exc:
            logger.warning("sweep %s=%s skipped: %s", parameter.value, value, exc)
            for y in y_points:
                rows.append(dict(parameter=parameter.value, value=float(value), y=float(y), pi_robust=math.nan,
                                 pi_partial_info=math.nan, pi_merton=math.nan, error=str(exc)))
            continue
        for y in y_points:
            row = dict(parameter=parameter.value, value=float(value), y=float(y))
            try:
                at_y = replace(prior, y0=float(y))
                f_y = 0.0 if at_y.degenerate else fy_quadrature(params, at_y, 0.0, float(y), cfg.quadrature)
                row.update(pi_robust=robust_feedback(params, at_y, 0.0, float(y), f_y).pi,
                           pi_partial_info=partial_info_strategy(params, at_y, 0.0, float(y)),
                           pi_merton=merton_strategy(params, at_y, 0.0), error="")
            except RobustPortError as exc:
                logger.warning("sweep %s=%s, y=%s failed: %s", parameter.value, value, y, exc)
                row.update(pi_robust=math.nan, pi_partial_info=math.nan, pi_merton=math.nan, error=str(exc))
            rows.append(row)
    return pd.DataFrame(rows, columns=["parameter", "value", "y", "pi_robust", "pi_partial_info", "pi_merton",
                                       "error"])


def run_sweep(cfg, parameter, values, y_points=SWEEP_Y_POINTS):
    """Sensitivity sweep written to sweep_<parameter>."""
    frame = sweep_table(cfg, parameter, values, y_points)
    path = write_frame(frame, output_path(cfg, f"sweep_{SweepParameter(parameter).value}"), cfg.output_format)
    failed = int((frame["error"] != "").sum())
    report = f"{len(frame)} sweep rows written, {failed} failed\n"
    return CommandOutput((path,), report, frame)


def run_simulate(cfg, strategies=DEFAULT_STRATEGIES, check_refinement=False):
    """Monte Carlo comparison of the strategies; summary plus optional per-path wealth."""
    params, prior = cfg.market, cfg.prior
    kinds = [StrategyKind(kind) for kind in strategies]
    surface = None
    if StrategyKind.Robust in kinds or cfg.scenario.drift_mode is DriftMode.WorstCase:
        surface = solve_f(params, prior, cfg.resolved_grid(y_range=_belief_range(prior)), cfg.quadrature)
    agents = build_agents(params, prior, surface, kinds)
    result = simulate(params, prior, agents, surface, cfg.scenario, check_refinement=check_refinement)
    files = [write_frame(simulation_frame(result), output_path(cfg, "simulation"), cfg.output_format)]
    if result.terminal_wealth is not None:
        files.append(write_frame(terminal_wealth_frame(result), output_path(cfg, "terminal_wealth"),
                                 cfg.output_format))
    report = utility_report(result)
    moments = result.diagnostics.get("y_moments")
    if moments and moments["variance_z"] is not None:
        report += (f"Var[Y(T)] sample {moments['sample_variance']:.6g} vs theory "
                   f"{moments['theory_variance']:.6g} (z={moments['variance_z']:.2f})\n")
    for alert in result.diagnostics["non_finite_alerts"]:
        report += f"warning: {alert}\n"
    return CommandOutput(tuple(files), report, result)


def run_check(cfg, search_budget=None):
    """Admissibility witness search plus the reference witness."""
    params, prior = cfg.market, cfg.prior
    result = check_admissibility(params, prior) if search_budget is None else \
        check_admissibility(params, prior, search_budget)
    delta1, delta7, epsilon3 = REFERENCE_WITNESS
    reference = admissibility_lhs(params, prior, delta1, delta7, epsilon3)
    path = write_frame(admissibility_frame(result), output_path(cfg, "admissibility"), cfg.output_format)
    return CommandOutput((path,), admissibility_report(result, reference, params.a), result)


def run_export_surface(cfg, backend="fd"):
    """Write a surface from either backend in the t,y,f,f_y,pi,regime layout."""
    params, prior = cfg.market, cfg.prior
    grid = cfg.resolved_grid()
    if backend == "fd":
        surface = solve_f(params, prior, grid, cfg.quadrature)
    else:
        surface = tabulate_surface(params, prior, grid, cfg.quadrature)
    path = write_frame(surface_frame(params, prior, surface), output_path(cfg, f"surface_{backend}"),
                       cfg.output_format)
    return CommandOutput((path,), f"{surface.provenance.value} surface written to {path}\n", surface)
