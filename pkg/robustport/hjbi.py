# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# hjbi.py - HJBI 방정식의 소스 항
# ==============================================================================

"""
Source term of the reduced HJBI equation for robustport v1.0

    f_t + f_yy gamma^2 / (2 sigma^2) + f_y gamma (r - y) / sigma^2 = g(t, y)

where g is piecewise quadratic in y and vanishes on the band
|y - r| <= a sqrt(gamma(t)).  Shared by the finite-difference solver and
the Monte Carlo oracle.
"""

import numpy as np

from .market_model import gamma_at


def band_half_width(params, prior, t):
    """a sqrt(gamma(t)), the half width of the dead band around r."""
    return params.a * np.sqrt(gamma_at(params, prior, t))


def source_from_band(params, band, y):
    """Source value for a known band half width; vectorized over y and band."""
    upper = np.maximum(y - params.r - band, 0.0)
    lower = np.maximum(params.r - band - y, 0.0)
    return (upper * upper + lower * lower) / (2.0 * params.sigma ** 2)


def source_g_tilde(params, prior, t, y):
    """
    Piecewise-quadratic source g(t, y).

    (r - y + c)^2 / (2 sigma^2) for y >= r + c, (r - y - c)^2 / (2 sigma^2)
    for y <= r - c and zero in between, with c = a sqrt(gamma(t)).
    """
    value = source_from_band(params, band_half_width(params, prior, t), np.asarray(y, dtype=float))
    return float(value) if value.ndim == 0 else value
