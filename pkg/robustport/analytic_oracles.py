# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# analytic_oracles.py - 준해석적 기준해
# ==============================================================================

"""
Semi-analytic oracles for robustport v1.0

f(t, y) = -E[ int_t^T g(s, Y^{t,y}(s)) ds ] where, for s >= t,

    Y^{t,y}(s) = gamma(s) [ y / gamma(t) + r (s - t) / sigma^2 + (W(s) - W(t)) / sigma ]

is exactly Gaussian.  The inner expectation of the piecewise-quadratic
source is therefore a sum of Gaussian partial moments and only the outer
time integral needs quadrature.  The outer integral is taken in
u = sqrt(s - t), which turns the sqrt(s - t) behaviour of the Gaussian
smoothing near s = t into a smooth integrand.

Also provided: a plain Monte Carlo estimator of the same representation,
the closed form for a zero-width confidence set, and the Merton and
partial-information strategies.
"""

import logging
import math

import numpy as np
from scipy import integrate
from scipy.stats import norm

from .config import ADAPTIVE_MAX_SUBDIVISIONS, MC_MIN_PATHS, MC_STEPS
from .enums import Provenance, QuadratureRule
from .errors import DomainError, NumericalFailure
from .hjbi import band_half_width, source_from_band
from .market_model import _check_time, gamma_at
from .models import A0Coefficients, QuadratureConfig, SolutionSurface
from .random_streams import map_blocks

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------------------
# Gaussian partial moments
# ------------------------------------------------------------------------------

def _partial_moments(m, v, b):
    m, v, b = np.broadcast_arrays(np.asarray(m, float), np.asarray(v, float), np.asarray(b, float))
    if np.any(v < 0):
        raise DomainError(f"variance must be >= 0, got {v.min()}")
    diff = m - b
    sd = np.sqrt(v)
    positive = sd > 0
    d = diff / np.where(positive, sd, 1.0)
    cdf = np.where(positive, norm.cdf(d), (diff >= 0).astype(float))
    pdf = np.where(positive, norm.pdf(d), 0.0)
    linear = diff * cdf + sd * pdf
    quadratic = (v + diff * diff) * cdf + diff * sd * pdf
    return linear, quadratic


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def gaussian_upper_quadratic_moment(m, v, b):
    """E[(X - b)^2 1{X >= b}] for X ~ N(m, v)."""
    return _scalar_or_array(_partial_moments(m, v, b)[1])


def gaussian_upper_linear_moment(m, v, b):
    """E[(X - b) 1{X >= b}] for X ~ N(m, v)."""
    return _scalar_or_array(_partial_moments(m, v, b)[0])


# ------------------------------------------------------------------------------
# Inner expectations along the belief diffusion
# ------------------------------------------------------------------------------

def _bridge_law(params, prior, s, t, y):
    """Mean and variance of Y^{t,y}(s); s may be an array, y broadcasts against it."""
    s = np.asarray(s, dtype=float)
    if prior.degenerate:
        mean = np.broadcast_to(np.asarray(y, float), np.broadcast(s, y).shape).astype(float)
        return mean, np.zeros_like(mean), np.zeros_like(s), np.ones_like(s)
    s2 = params.sigma ** 2
    gamma_s = gamma_at(params, prior, s)
    gamma_t = gamma_at(params, prior, t)
    ratio = np.asarray(gamma_s) / gamma_t
    mean = ratio * y + gamma_s * params.r * (s - t) / s2
    variance = gamma_s * gamma_s * (s - t) / s2
    return mean, np.broadcast_to(variance, mean.shape), np.asarray(gamma_s), ratio


def _inner_expectations(params, prior, s, t, y):
    """E[g(s, Y(s))] and E[g_y(s, Y(s))] gamma(s) / gamma(t)."""
    mean, variance, gamma_s, ratio = _bridge_law(params, prior, s, t, y)
    c = params.a * np.sqrt(gamma_s)
    upper_b = params.r + c
    lower_b = c - params.r  # threshold of the reflected variable -Y
    lin_up, quad_up = _partial_moments(mean, variance, upper_b)
    lin_lo, quad_lo = _partial_moments(-mean, variance, lower_b)
    s2 = params.sigma ** 2
    source = (quad_up + quad_lo) / (2.0 * s2)
    gradient = (lin_up - lin_lo) / s2 * ratio
    return source, gradient


def expected_source(params, prior, s, t, y):
    """
    E[g(s, Y^{t,y}(s))] in closed form.

    Args:
        s: Evaluation time(s), t <= s <= T
        t: Start time of the belief diffusion
        y: Start state
    """
    _check_time(params, t)
    s_arr = _check_time(params, s)
    if np.any(s_arr < t):
        raise DomainError(f"expected_source needs s >= t, got s={s}, t={t}")
    return _scalar_or_array(_inner_expectations(params, prior, s_arr, t, y)[0])


# ------------------------------------------------------------------------------
# Quadrature oracle
# ------------------------------------------------------------------------------

def _simpson_integrals(params, prior, t, y, n_nodes):
    """-int_t^T of both inner expectations by Simpson in u = sqrt(s - t)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    span = params.T - t
    if span <= 0:
        return np.zeros_like(y), np.zeros_like(y)
    u = np.linspace(0.0, math.sqrt(span), n_nodes)
    s = np.minimum(t + u * u, params.T)[:, None]
    source, gradient = _inner_expectations(params, prior, s, t, y[None, :])
    jacobian = 2.0 * u[:, None]
    f = -integrate.simpson(source * jacobian, x=u, axis=0)
    f_y = -integrate.simpson(gradient * jacobian, x=u, axis=0)
    return f, f_y


def _adaptive_integral(params, prior, t, y, cfg, which):
    span = params.T - t
    if span <= 0:
        return 0.0

    def integrand(u):
        s = min(t + u * u, params.T)
        parts = _inner_expectations(params, prior, np.array([s]), t, y)
        return float(parts[which][0]) * 2.0 * u

    result = integrate.quad(integrand, 0.0, math.sqrt(span), epsabs=cfg.abs_tol, epsrel=0.0,
                            limit=ADAPTIVE_MAX_SUBDIVISIONS, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3 or abserr > cfg.abs_tol:
        raise NumericalFailure(
            f"adaptive quadrature did not reach abs_tol={cfg.abs_tol} at t={t}, y={y} (error {abserr:.3g})",
            stage="quadrature", last_estimate=-value)
    return -value


def _quadrature(params, prior, t, y, cfg, which):
    cfg = cfg or QuadratureConfig()
    t = float(_check_time(params, t))
    if cfg.rule is QuadratureRule.Adaptive:
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        values = np.array([_adaptive_integral(params, prior, t, yi, cfg, which) for yi in ys])
    else:
        values = _simpson_integrals(params, prior, t, y, cfg.n_time_nodes)[which]
    return float(values[0]) if np.ndim(y) == 0 else values


def f_quadrature(params, prior, t, y, cfg=None):
    """
    f(t, y) from the stochastic representation.

    Exact zero at t = T; accepts scalar or array y.
    """
    return _quadrature(params, prior, t, y, cfg, 0)


def fy_quadrature(params, prior, t, y, cfg=None):
    """
    f_y(t, y) = -int_t^T E[g_y(s, Y(s)) gamma(s) / gamma(t)] ds.

    Raises:
        DomainError: gamma(t) = 0, where f carries no belief dependence
    """
    if prior.degenerate:
        raise DomainError("f_y oracle needs a prior with positive variance")
    return _quadrature(params, prior, t, y, cfg, 1)


def f_and_fy_quadrature(params, prior, t, y, cfg=None):
    """Both oracle values from one pass of the Simpson rule."""
    cfg = cfg or QuadratureConfig()
    if cfg.rule is QuadratureRule.Adaptive:
        return f_quadrature(params, prior, t, y, cfg), fy_quadrature(params, prior, t, y, cfg)
    t = float(_check_time(params, t))
    f, f_y = _simpson_integrals(params, prior, t, y, cfg.n_time_nodes)
    if np.ndim(y) == 0:
        return float(f[0]), float(f_y[0])
    return f, f_y


def tabulate_surface(params, prior, grid, cfg=None, times=None):
    """
    Quadrature-provenance surface on the grid's states.

    Args:
        times: Optional ascending time nodes; the grid's time nodes by default
    """
    cfg = cfg or QuadratureConfig()
    states = grid.states()
    times = grid.times(params.T) if times is None else np.asarray(times, dtype=float)
    f = np.zeros((times.size, states.size))
    f_y = np.zeros_like(f)
    for i, t in enumerate(times):
        if prior.degenerate:
            f[i] = -(params.T - t) * (params.r - states) ** 2 / (2.0 * params.sigma ** 2)
            f_y[i] = (params.T - t) * (params.r - states) / params.sigma ** 2
        else:
            f[i], f_y[i] = f_and_fy_quadrature(params, prior, t, states, cfg)
    logger.info("tabulated quadrature surface on %d x %d nodes", times.size, states.size)
    return SolutionSurface(grid, times, states, f, f_y, Provenance.Quadrature)


# ------------------------------------------------------------------------------
# Monte Carlo oracle
# ------------------------------------------------------------------------------

def f_mc(params, prior, t, y, n_paths, seed, n_steps=MC_STEPS, n_workers=1):
    """
    Monte Carlo estimate of f(t, y) with its standard error.

    Y is simulated exactly on a uniform grid of n_steps; the time integral
    of the source uses the trapezoid rule.  Deterministic for a fixed seed
    and independent of n_workers.
    """
    if n_paths < MC_MIN_PATHS:
        raise DomainError(f"n_paths must be >= {MC_MIN_PATHS}, got {n_paths}")
    t = float(_check_time(params, t))
    if params.T - t <= 0:
        return 0.0, 0.0
    s = np.linspace(t, params.T, n_steps + 1)
    ds = np.diff(s)
    s2 = params.sigma ** 2
    gamma_s = gamma_at(params, prior, s)
    bands = band_half_width(params, prior, s)
    # Y(s) / gamma(s) = y / gamma(t) + r (s - t) / sigma^2 + (W(s) - W(t)) / sigma
    drift_part = None if prior.degenerate else y / gamma_s[0] + params.r * (s - t) / s2

    def worker(rng, n):
        w = np.zeros(n)
        y_now = np.full(n, float(y))
        g_prev = source_from_band(params, bands[0], y_now)
        total = np.zeros(n)
        for j in range(n_steps):
            w += rng.standard_normal(n) * math.sqrt(ds[j])
            if drift_part is not None:
                y_now = gamma_s[j + 1] * (drift_part[j + 1] + w / params.sigma)
            g_next = source_from_band(params, bands[j + 1], y_now)
            total += 0.5 * (g_prev + g_next) * ds[j]
            g_prev = g_next
        return -total

    samples = np.concatenate(map_blocks(worker, n_paths, seed, n_workers))
    estimate = float(np.mean(samples))
    std_error = float(np.std(samples, ddof=1) / math.sqrt(n_paths))
    logger.debug("f_mc(t=%g, y=%g) = %.8g +/- %.2g over %d paths", t, y, estimate, std_error, n_paths)
    return estimate, std_error


# ------------------------------------------------------------------------------
# Closed forms
# ------------------------------------------------------------------------------

def closed_form_a0(params, prior, t):
    """
    Coefficients of f = f1 y^2 + f2 y + f3 for a zero-width confidence set.

    Raises:
        DomainError: for a degenerate prior (use merton_strategy instead)
    """
    if prior.degenerate:
        raise DomainError("closed form needs a prior with positive variance; use the Merton branch")
    t = float(_check_time(params, t))
    gamma_t = gamma_at(params, prior, t)
    gamma_T = gamma_at(params, prior, params.T)
    s2 = params.sigma ** 2
    tau = params.T - t
    f1 = (gamma_T - gamma_t) / (2.0 * gamma_t * gamma_t)
    f2 = -2.0 * params.r * f1
    f3 = (params.r ** 2 / s2 ** 2 * gamma_T * tau * tau / 2.0
          - (params.r ** 2 - gamma_T) * tau / (2.0 * s2)
          - 0.5 * math.log(gamma_t / gamma_T))
    return A0Coefficients(t, f1, f2, f3)


def _discounted_scale(params, t):
    return params.k * math.exp(params.r * (params.T - t)) * params.sigma ** 2


def merton_strategy(params, prior, t):
    """Dollar position of the classical investor who knows the drift is y0."""
    t = float(_check_time(params, t))
    return (prior.y0 - params.r) / _discounted_scale(params, t)


def partial_info_strategy(params, prior, t, y):
    """Dollar position of the ambiguity-neutral learner (Bayesian, no drift set)."""
    t = float(_check_time(params, t))
    if prior.degenerate:
        ratio = 1.0
    else:
        ratio = gamma_at(params, prior, params.T) / gamma_at(params, prior, t)
    return ratio * (y - params.r) / _discounted_scale(params, t)
