# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# simulator.py - 몬테카를로 시뮬레이션 엔진
# ==============================================================================

"""
Monte Carlo engine for robustport v1.0
Simulates belief and wealth paths for a set of investors and aggregates
terminal CARA utilities.

Under PriorDraw and Fixed drift the posterior mean follows its exact closed
form and all investors share the same Brownian path.  Under WorstCase each
investor faces the drift that is worst for its own position, so each one
carries its own belief path driven by

    dY = gamma / sigma^2 (mu_worst - Y) dt + gamma / sigma dW.

Wealth uses Euler-Maruyama on dX = r X dt + pi (mu - r) dt + sigma pi dW with
the riskless part compounded exactly, so a zero position grows to x0 e^{rT}.
"""

import logging
import math
import warnings
from dataclasses import replace

import numpy as np
from rich import box
from rich.table import Table

from .analysis import render_table
from .config import GRID_HALF_WIDTH_STD, NON_FINITE_ALERT_RATE
from .enums import DriftMode, StrategyKind
from .errors import ConfigError, NumericalWarning, SurfaceCoverageError
from .market_model import gamma_at, sample_y, y_marginal_law
from .models import SimulationResult, StrategyStats
from .pde_engine import surface_lookup
from .random_streams import map_blocks
from .strategy import worst_case_selector

logger = logging.getLogger(__name__)

REFINEMENT_Z_LIMIT = 3.0


def _check_surface(params, prior, agents, surface, cfg):
    needs_surface = cfg.drift_mode is DriftMode.WorstCase or any(
        agent.kind is StrategyKind.Robust for agent in agents)
    if surface is None:
        if needs_surface:
            raise SurfaceCoverageError("this scenario needs a solution surface")
        return
    half = GRID_HALF_WIDTH_STD * prior.sigma0
    lo, hi = prior.y0 - half, prior.y0 + half
    if not surface.covers(lo, hi):
        raise SurfaceCoverageError(
            f"surface states [{surface.states[0]}, {surface.states[-1]}] do not cover the belief range "
            f"[{lo:.6g}, {hi:.6g}]")


def _draw_drift(prior, cfg, rng, n):
    if cfg.drift_mode is DriftMode.PriorDraw:
        return prior.y0 + prior.sigma0 * rng.standard_normal(n)
    if cfg.drift_mode is DriftMode.Fixed:
        return np.full(n, float(cfg.fixed_mu))
    return None


def _run_block(params, prior, agents, surface, cfg, rng, n):
    """Terminal wealth per investor and Y(T) for one block of paths."""
    times = np.linspace(0.0, params.T, cfg.n_steps + 1)
    dt = params.T / cfg.n_steps
    sqrt_dt = math.sqrt(dt)
    growth = math.exp(params.r * dt)
    gammas = gamma_at(params, prior, times)
    s2 = params.sigma ** 2
    worst = cfg.drift_mode is DriftMode.WorstCase

    mu = _draw_drift(prior, cfg, rng, n)
    wealth = [np.full(n, cfg.initial_wealth) for _ in agents]
    own_y = [np.full(n, prior.y0) for _ in agents]
    shared_y = np.full(n, prior.y0)
    w = np.zeros(n)

    for j in range(cfg.n_steps):
        t = times[j]
        dw = sqrt_dt * rng.standard_normal(n)
        for idx, agent in enumerate(agents):
            y = own_y[idx] if worst else shared_y
            pi = agent.position(t, y)
            if worst:
                f_y = surface_lookup(surface, t, y)[1]
                drift = worst_case_selector(params, prior, t, y, pi, f_y)
                own_y[idx] = y + gammas[j] / s2 * (drift - y) * dt + gammas[j] / params.sigma * dw
            else:
                drift = mu
            x = wealth[idx]
            wealth[idx] = x * growth + pi * (drift - params.r) * dt + params.sigma * pi * dw
        w += dw
        if not worst:
            shared_y = sample_y(params, prior, times[j + 1], mu, w)
    return wealth, shared_y


def _strategy_stats(name, terminal, k):
    with np.errstate(over="ignore", invalid="ignore"):
        utility = -np.exp(-k * terminal) / k
    finite = np.isfinite(terminal) & np.isfinite(utility)
    n_bad = int(np.count_nonzero(~finite))
    x, u = terminal[finite], utility[finite]
    n = x.size
    if n == 0:
        nan = float("nan")
        return StrategyStats(name, nan, nan, nan, nan, nan, nan, nan, 0, n_bad)
    mean_x = math.fsum(x) / n
    mean_u = math.fsum(u) / n
    var_x = math.fsum((x - mean_x) ** 2) / (n - 1) if n > 1 else 0.0
    var_u = math.fsum((u - mean_u) ** 2) / (n - 1) if n > 1 else 0.0
    se_u = math.sqrt(var_u / n)
    ce = -math.log(-k * mean_u) / k if mean_u < 0 else math.inf
    return StrategyStats(name=name, mean_wealth=mean_x, wealth_variance=var_x, mean_utility=mean_u,
                         utility_std_error=se_u, certainty_equivalent=ce, min_wealth=float(x.min()),
                         max_wealth=float(x.max()), n_paths=n, n_non_finite=n_bad)


def _y_moment_check(params, prior, cfg, y_terminal):
    """Sample moments of Y(T) against the exact law; None under WorstCase."""
    if cfg.drift_mode is DriftMode.WorstCase:
        return None
    if cfg.drift_mode is DriftMode.PriorDraw:
        theory_mean, theory_var = y_marginal_law(params, prior, params.T)
    else:
        theory_mean = float(sample_y(params, prior, params.T, cfg.fixed_mu, 0.0))
        theory_var = gamma_at(params, prior, params.T) ** 2 * params.T / params.sigma ** 2
    n = y_terminal.size
    sample_mean = math.fsum(y_terminal) / n
    sample_var = math.fsum((y_terminal - sample_mean) ** 2) / (n - 1) if n > 1 else 0.0
    z = None
    if theory_var > 0 and n > 1:
        z = (sample_var - theory_var) / (theory_var * math.sqrt(2.0 / (n - 1)))
    return {"t": params.T, "sample_mean": sample_mean, "sample_variance": sample_var,
            "theory_mean": theory_mean, "theory_variance": theory_var, "variance_z": z}


def simulate(params, prior, agents, surface, cfg, check_refinement=False):
    """
    Run the scenario for every investor and aggregate terminal statistics.

    Args:
        agents: Investors, reported in this order
        surface: SolutionSurface; may be None when no investor or drift needs it
        cfg: ScenarioConfig
        check_refinement: Re-run with twice the steps and record the change
            in mean utility in units of its standard error

    Raises:
        SurfaceCoverageError: before any path is simulated
    """
    if not agents:
        raise ConfigError("simulate needs at least one strategy")
    _check_surface(params, prior, agents, surface, cfg)
    logger.info("simulating %d paths x %d steps, drift=%s, %d strategies",
                cfg.n_paths, cfg.n_steps, cfg.drift_mode.value, len(agents))

    blocks = map_blocks(lambda rng, n: _run_block(params, prior, agents, surface, cfg, rng, n),
                        cfg.n_paths, cfg.seed, cfg.n_workers)
    terminal = [np.concatenate([block[0][idx] for block in blocks]) for idx in range(len(agents))]
    y_terminal = np.concatenate([block[1] for block in blocks])

    stats = tuple(_strategy_stats(agent.name, values, params.k) for agent, values in zip(agents, terminal))
    diagnostics = {"y_moments": _y_moment_check(params, prior, cfg, y_terminal),
                   "n_steps": cfg.n_steps, "non_finite_alerts": []}
    for item in stats:
        if item.n_non_finite > NON_FINITE_ALERT_RATE * cfg.n_paths:
            message = f"{item.name}: {item.n_non_finite} of {cfg.n_paths} paths ended non-finite"
            diagnostics["non_finite_alerts"].append(message)
            warnings.warn(message, NumericalWarning, stacklevel=2)
            logger.warning(message)

    if check_refinement:
        refined = simulate(params, prior, agents, surface, replace(cfg, n_steps=2 * cfg.n_steps, keep_paths=False))
        shifts = {}
        for base, fine in zip(stats, refined.stats):
            se = base.utility_std_error
            shifts[base.name] = abs(fine.mean_utility - base.mean_utility) / se if se > 0 else 0.0
        diagnostics["step_refinement"] = shifts
        diagnostics["step_refinement_ok"] = all(z < REFINEMENT_Z_LIMIT for z in shifts.values())

    kept = None
    if cfg.keep_paths:
        kept = {agent.name: values for agent, values in zip(agents, terminal)}
    return SimulationResult(cfg, stats, diagnostics, kept)


def utility_report(result):
    """Per-strategy table of utility and wealth statistics as plain text."""
    table = Table(title=f"Terminal utility ({result.scenario.drift_mode.value} drift, "
                        f"{result.scenario.n_paths} paths, {result.scenario.n_steps} steps)",
                  box=box.SIMPLE, show_header=True, header_style="bold")
    for column in ("Strategy", "Mean U", "SE(U)", "CE", "Mean X", "Var X", "Min X", "Max X", "Non-finite"):
        table.add_column(column, justify="left" if column == "Strategy" else "right")
    for item in result.stats:
        table.add_row(item.name, f"{item.mean_utility:.6f}", f"{item.utility_std_error:.2e}",
                      f"{item.certainty_equivalent:.6f}", f"{item.mean_wealth:.6f}",
                      f"{item.wealth_variance:.3e}", f"{item.min_wealth:.6f}", f"{item.max_wealth:.6f}",
                      str(item.n_non_finite))
    return render_table(table)


def sample_price_paths(params, prior, mu, n_steps, rng):
    """
    Log-price and exact posterior-mean paths for given drifts.

    Rows are paths.  Returns (times, log_price, y) with log_price starting
    at 0 and y computed from the closed form of the filter.
    """
    mu = np.asarray(mu, dtype=float)
    times = np.linspace(0.0, params.T, n_steps + 1)
    increments = math.sqrt(params.T / n_steps) * rng.standard_normal((mu.size, n_steps))
    w = np.concatenate([np.zeros((mu.size, 1)), np.cumsum(increments, axis=1)], axis=1)
    log_price = (mu[:, None] - 0.5 * params.sigma ** 2) * times[None, :] + params.sigma * w
    y = sample_y(params, prior, times[None, :], mu[:, None], w)
    return times, log_price, y
