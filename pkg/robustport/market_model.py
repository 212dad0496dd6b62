# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# market_model.py - 베이지안 학습 및 신뢰구간
# ==============================================================================

"""
Market model for robustport v1.0
Bayesian filtering of the unknown drift from observed log prices, the
state-dependent confidence set it induces and the exact law of the
posterior mean.

All functions are closed form and accept any time in [0, T].  Formulas are
written as sigma0^2 sigma^2 / (sigma^2 + sigma0^2 t) instead of the
precision form so that a zero prior variance needs no special casing of
1 / sigma0^2; the degenerate branch is still explicit where the result
is a known constant.
"""

import logging

import numpy as np
from scipy.stats import norm

from .errors import DomainError
from .models import BeliefState, ConfidenceInterval

logger = logging.getLogger(__name__)

_TIME_SLACK = 1e-12


def _check_time(params, t):
    t_arr = np.asarray(t, dtype=float)
    slack = _TIME_SLACK * params.T
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < -slack) or np.any(t_arr > params.T + slack):
        raise DomainError(f"time {t} outside [0, {params.T}]")
    return np.clip(t_arr, 0.0, params.T)


def _as_output(values, like):
    if np.ndim(like) == 0:
        return float(values)
    return values


def gamma_at(params, prior, t):
    """
    Posterior variance of the drift at time t.

    gamma(t) = (sigma0^-2 + t sigma^-2)^-1, and 0 for a degenerate prior.
    Accepts scalars or arrays of times.
    """
    t_arr = _check_time(params, t)
    if prior.degenerate:
        return _as_output(np.zeros_like(t_arr), t)
    s2 = params.sigma ** 2
    gamma = prior.sigma0_sq * s2 / (s2 + prior.sigma0_sq * t_arr)
    return _as_output(gamma, t)


def _gamma_unchecked(params, prior, t):
    s2 = params.sigma ** 2
    return prior.sigma0_sq * s2 / (s2 + prior.sigma0_sq * np.asarray(t, dtype=float))


def posterior_from_logprice(params, prior, t, z_t, z_0):
    """
    Belief state after observing the log price move z_t - z_0 over [0, t].

    Y(t) = gamma(t) [sigma^-2 (z_t - z_0 + t sigma^2 / 2) + sigma0^-2 y0]
    """
    t_val = float(_check_time(params, t))
    if prior.degenerate:
        return BeliefState(t_val, prior.y0, 0.0)
    s2 = params.sigma ** 2
    numerator = prior.sigma0_sq * (z_t - z_0 + 0.5 * t_val * s2) + s2 * prior.y0
    y = numerator / (s2 + prior.sigma0_sq * t_val)
    return BeliefState(t_val, float(y), gamma_at(params, prior, t_val))


def confidence_set(params, belief):
    """The drift set [y - a sqrt(gamma), y + a sqrt(gamma)]."""
    if belief.gamma < 0:
        raise DomainError(f"posterior variance must be >= 0, got {belief.gamma}")
    half_width = params.a * np.sqrt(belief.gamma)
    return ConfidenceInterval(belief.y - half_width, belief.y + half_width)


def confidence_level(a):
    """Probability mass of the set under the posterior: 2 Phi(a) - 1."""
    if a < 0:
        raise DomainError(f"confidence multiplier must be >= 0, got {a}")
    return float(2.0 * norm.cdf(a) - 1.0)


def y_marginal_law(params, prior, t):
    """
    Mean and variance of Y(t) under the physical measure.

    Y(t) ~ N(y0, sigma0^4 t / (sigma0^2 t + sigma^2)), which equals
    the integral of gamma(s)^2 / sigma^2 over [0, t].
    """
    t_val = float(_check_time(params, t))
    if prior.degenerate:
        return prior.y0, 0.0
    s2 = params.sigma ** 2
    variance = prior.sigma0_sq ** 2 * t_val / (prior.sigma0_sq * t_val + s2)
    return prior.y0, float(variance)


def sample_y(params, prior, t, mu, w_t):
    """
    Exact posterior mean given a drift draw mu and the Brownian value W(t).

    Y(t) = gamma(t) (mu t / sigma^2 + W(t) / sigma + y0 / sigma0^2)
    """
    t_arr = _check_time(params, t)
    if prior.degenerate:
        return np.full(np.broadcast(t_arr, mu, w_t).shape, prior.y0)
    s2 = params.sigma ** 2
    numerator = prior.sigma0_sq * (mu * t_arr + params.sigma * w_t) + s2 * prior.y0
    return numerator / (s2 + prior.sigma0_sq * t_arr)


def filter_price_path(params, prior, times, log_prices):
    """Closed-form posterior mean along an observed log-price path."""
    times = _check_time(params, times)
    log_prices = np.asarray(log_prices, dtype=float)
    if times.shape != log_prices.shape:
        raise DomainError(f"times {times.shape} and log prices {log_prices.shape} differ in shape")
    if prior.degenerate:
        return np.full(times.shape, prior.y0)
    s2 = params.sigma ** 2
    moves = log_prices - log_prices[0] + 0.5 * times * s2
    return (prior.sigma0_sq * moves + s2 * prior.y0) / (s2 + prior.sigma0_sq * times)


def recursive_filter(params, prior, times, log_prices):
    """
    Euler recursion of dY = (gamma / sigma) dW^S on an observed path.

    The innovation is dW^S = (dZ - (Y - sigma^2 / 2) dt) / sigma.  Converges
    to filter_price_path as the sampling interval shrinks.
    """
    times = _check_time(params, times)
    log_prices = np.asarray(log_prices, dtype=float)
    y = np.empty_like(times)
    y[0] = prior.y0
    if prior.degenerate:
        y[:] = prior.y0
        return y
    s2 = params.sigma ** 2
    gammas = _gamma_unchecked(params, prior, times)
    dz = np.diff(log_prices)
    dt = np.diff(times)
    for i in range(times.size - 1):
        innovation = dz[i] - (y[i] - 0.5 * s2) * dt[i]
        y[i + 1] = y[i] + gammas[i] / s2 * innovation
    logger.debug("recursive filter over %d steps, final Y=%.6g", times.size - 1, y[-1])
    return y
