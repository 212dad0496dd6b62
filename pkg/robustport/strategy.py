# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# strategy.py - 강건 최적 전략 및 허용성 검사
# ==============================================================================

"""
Strategy module for robustport v1.0
Robust optimal feedback, worst-case drift, trading regions, the candidate
value function and the admissibility inequalities.

The feedback at (t, y) is

    pi = e^{-r(T-t)} / (k sigma^2) * (myopic drift gap + f_y gamma(t))

where the drift gap is y - a sqrt(gamma) - r when r lies below the
confidence set, y + a sqrt(gamma) - r when it lies above, and zero when r
is inside it.
"""

import logging
import math

import numpy as np
from scipy.optimize import bisect

from .config import (
    ADMISSIBILITY_BUDGET,
    ADMISSIBILITY_DELTA1_RANGE,
    ADMISSIBILITY_DELTA7_RANGE,
    ADMISSIBILITY_EPS3_RANGE,
    BISECTION_XTOL,
)
from .enums import Regime, TradeRegion
from .errors import DomainError, NumericalFailure, RegionNotFoundError
from .hjbi import band_half_width
from .market_model import _check_time, gamma_at
from .models import AdmissibilityResult, AdmissibilityWitness, RegionLabel, StrategyDecision
from .pde_engine import surface_lookup

logger = logging.getLogger(__name__)

_SERIES_SWITCH = 1e-2


def _scale(params, t):
    """e^{-r(T-t)} / (k sigma^2)."""
    return math.exp(-params.r * (params.T - t)) / (params.k * params.sigma ** 2)


def regime_of(params, prior, t, y):
    """Regime of every state in y; ties at a set endpoint count as InSet."""
    c = band_half_width(params, prior, t)
    y = np.asarray(y, dtype=float)
    codes = np.where(params.r < y - c, 0, np.where(params.r > y + c, 2, 1))
    table = (Regime.BelowSet, Regime.InSet, Regime.AboveSet)
    if codes.ndim == 0:
        return table[int(codes)]
    return np.array(table, dtype=object)[codes]


def worst_case_mu(params, prior, t, y):
    """
    Worst-case drift inside the confidence set.

    Returns:
        (Regime, float): the lower endpoint for BelowSet, the upper one for
        AboveSet and the representative value y for InSet ("any in set")
    """
    t = float(_check_time(params, t))
    c = band_half_width(params, prior, t)
    regime = regime_of(params, prior, t, y)
    if regime is Regime.BelowSet:
        return regime, y - c
    if regime is Regime.AboveSet:
        return regime, y + c
    return regime, float(y)


def myopic_and_hedging(params, prior, t, y, f_y):
    """Vectorized (myopic, hedging) dollar demands."""
    t = float(_check_time(params, t))
    c = band_half_width(params, prior, t)
    gamma = gamma_at(params, prior, t)
    scale = _scale(params, t)
    y = np.asarray(y, dtype=float)
    low, high = y - c - params.r, y + c - params.r
    gap = np.where(low > 0.0, low, np.where(high < 0.0, high, 0.0))
    return scale * gap, scale * np.asarray(f_y, dtype=float) * gamma


def robust_position(params, prior, t, y, f_y):
    """pi = myopic + hedging, vectorized over y and f_y."""
    myopic, hedging = myopic_and_hedging(params, prior, t, y, f_y)
    return myopic + hedging


def robust_feedback(params, prior, t, y, f_y_value):
    """
    Full StrategyDecision at one point.

    f_y_value comes from a finite-difference surface or the quadrature
    oracle.  For a degenerate prior gamma = 0, so the hedging term and the
    band vanish and pi reduces to the Merton position.
    """
    t = float(_check_time(params, t))
    myopic, hedging = myopic_and_hedging(params, prior, t, y, f_y_value)
    myopic, hedging = float(myopic), float(hedging)
    regime, mu_worst = worst_case_mu(params, prior, t, y)
    return StrategyDecision(t=t, y=float(y), pi=myopic + hedging, regime=regime, mu_worst=float(mu_worst),
                            any_in_set=regime is Regime.InSet, myopic=myopic, hedging=hedging)


def worst_case_selector(params, prior, t, y, pi, f_y):
    """
    Drift that minimizes the objective of a given position pi.

    The pivot is the pure hedging position f_y gamma e^{-r(T-t)} / (k sigma^2):
    a position above it faces the lower set endpoint, one below it the upper
    endpoint, and a position exactly on it is charged y.
    """
    t = float(_check_time(params, t))
    c = band_half_width(params, prior, t)
    pivot = _scale(params, t) * np.asarray(f_y, dtype=float) * gamma_at(params, prior, t)
    pi = np.asarray(pi, dtype=float)
    y = np.asarray(y, dtype=float)
    mu = np.where(pi > pivot, y - c, np.where(pi < pivot, y + c, y))
    return float(mu) if mu.ndim == 0 else mu


# ------------------------------------------------------------------------------
# Trading regions
# ------------------------------------------------------------------------------

def _crossing(func, lower, upper, which):
    f_lo, f_hi = func(lower), func(upper)
    if f_lo == 0.0:
        return lower
    if f_hi == 0.0:
        return upper
    if np.sign(f_lo) == np.sign(f_hi):
        raise RegionNotFoundError(
            f"no {which} zero crossing of the feedback on [{lower:.6g}, {upper:.6g}]; widen the grid")
    return bisect(func, lower, upper, xtol=BISECTION_XTOL)


def classify_regions(params, prior, t, surface):
    """
    Sell / SmallTrade / Buy regions of the feedback at time t.

    Crossings are located by bisection on the surface-interpolated pi.
    With a zero-width set only the Sell and Buy regions exist and they meet
    at the single crossing near r.
    """
    t = float(_check_time(params, t))
    if t >= params.T:
        raise DomainError("trading regions need t < T")
    y_min, y_max = float(surface.states[0]), float(surface.states[-1])
    c = band_half_width(params, prior, t)

    def feedback(y):
        return float(robust_position(params, prior, t, y, surface_lookup(surface, t, y)[1]))

    if c == 0.0:
        middle = _crossing(feedback, y_min, y_max, "single")
        return [RegionLabel(TradeRegion.Sell, -math.inf, middle),
                RegionLabel(TradeRegion.Buy, middle, math.inf)]

    band_low, band_high = params.r - c, params.r + c
    if not (y_min < band_low and band_high < y_max):
        raise RegionNotFoundError(
            f"grid [{y_min}, {y_max}] does not contain the band [{band_low:.6g}, {band_high:.6g}]; widen the grid")
    y_low = _crossing(feedback, y_min, band_low, "lower")
    inner = _crossing(feedback, band_low, band_high, "inner")
    y_high = _crossing(feedback, band_high, y_max, "upper")
    logger.debug("regions at t=%g: y_low=%.10g inner=%.10g y_high=%.10g", t, y_low, inner, y_high)
    return [
        RegionLabel(TradeRegion.Sell, -math.inf, y_low),
        RegionLabel(TradeRegion.SmallTrade, y_low, y_high, interior_points=(inner,), interior_signs=("+", "-")),
        RegionLabel(TradeRegion.Buy, y_high, math.inf),
    ]


# ------------------------------------------------------------------------------
# Value function
# ------------------------------------------------------------------------------

def value_function(params, prior, t, x, f_value):
    """phi(t, x, y) = -(1/k) exp(-k e^{r(T-t)} x + f(t, y))."""
    t = float(_check_time(params, t))
    exponent = -params.k * math.exp(params.r * (params.T - t)) * x + f_value
    try:
        return -math.exp(exponent) / params.k
    except OverflowError as exc:
        raise NumericalFailure(f"value function exponent {exponent:.6g} overflows at t={t}, x={x}",
                               stage="value_function") from exc


def robust_value_at(params, prior, surface, t, x, y):
    """Value function with f read off a surface."""
    return value_function(params, prior, t, x, surface_lookup(surface, t, y)[0])


# ------------------------------------------------------------------------------
# Admissibility
# ------------------------------------------------------------------------------

def _learning_gap(x):
    """x - 2 ln(1 + x) + x / (1 + x), with its alternating series for small x."""
    x = np.asarray(x, dtype=float)
    series = sum((-1.0) ** (n + 1) * (1.0 - 2.0 / n) * x ** n for n in range(3, 10))
    closed = x - 2.0 * np.log1p(x) + x / (1.0 + x)
    return np.where(x < _SERIES_SWITCH, series, closed)


def _lhs_values(params, prior, delta1, delta7, epsilon3):
    delta8 = delta7 / (delta7 - 1.0)
    constant = 2.0 * (2.0 * delta1 * delta1 * delta7 - delta1) * delta8
    ratio = prior.sigma0_sq / params.sigma ** 2
    x = ratio * params.T
    lhs1 = constant * (1.0 + 1.0 / epsilon3) * x * x
    lhs2 = constant * (1.0 + epsilon3) * _learning_gap(x)
    lhs2_alt = constant * (1.0 + epsilon3) * x ** 3 / 3.0
    return delta8, lhs1, lhs2, lhs2_alt


def admissibility_lhs(params, prior, delta1, delta7, epsilon3):
    """
    Witness for fixed constants; delta8 follows from 1/delta7 + 1/delta8 = 1.

    lhs2 is written in x = sigma0^2 T / sigma^2, where the bracket
    T sigma0^2 - 2 sigma^2 ln(1 + x) - sigma^4 / (sigma0^2 T + sigma^2) + sigma^2
    equals sigma^2 (x - 2 ln(1 + x) + x / (1 + x)).
    """
    if delta1 <= 1.0 or delta7 <= 1.0 or epsilon3 <= 0.0:
        raise DomainError(f"need delta1 > 1, delta7 > 1, epsilon3 > 0; got {delta1}, {delta7}, {epsilon3}")
    delta8, lhs1, lhs2, lhs2_alt = _lhs_values(params, prior, delta1, delta7, epsilon3)
    return AdmissibilityWitness(delta1, delta7, float(delta8), epsilon3,
                                float(lhs1), float(lhs2), float(lhs2_alt))


def check_admissibility(params, prior, search_budget=ADMISSIBILITY_BUDGET):
    """
    Grid search for constants making both inequalities hold.

    delta1, delta7 and epsilon3 are log-spaced over their ranges with an
    equal number of points per axis; the returned witness minimizes
    max(lhs1, lhs2) and found reports whether that maximum is below 1.
    """
    per_axis = max(2, int(round(search_budget ** (1.0 / 3.0))))
    while per_axis ** 3 > search_budget and per_axis > 2:
        per_axis -= 1
    d1 = np.geomspace(*ADMISSIBILITY_DELTA1_RANGE, per_axis)
    d7 = np.geomspace(*ADMISSIBILITY_DELTA7_RANGE, per_axis)
    e3 = np.geomspace(*ADMISSIBILITY_EPS3_RANGE, per_axis)
    D1, D7, E3 = np.meshgrid(d1, d7, e3, indexing="ij")
    _, lhs1, lhs2, _ = _lhs_values(params, prior, D1, D7, E3)
    objective = np.maximum(lhs1, lhs2)
    best = np.unravel_index(np.argmin(objective), objective.shape)
    witness = admissibility_lhs(params, prior, float(D1[best]), float(D7[best]), float(E3[best]))
    evaluations = per_axis ** 3
    logger.info("admissibility search: %d evaluations, best max(lhs1, lhs2)=%.6g",
                evaluations, objective[best])
    return AdmissibilityResult(found=witness.valid, witness=witness, evaluations=evaluations)
