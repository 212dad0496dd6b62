# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# tests/conftest.py - 공용 테스트 픽스처
# ==============================================================================

"""Shared fixtures: the reference calibration and cached solution surfaces."""

from dataclasses import replace

import pytest

from robustport import GridSpec, MarketParams, Prior, QuadratureConfig, solve_f, tabulate_surface
from robustport.config import (
    DEFAULT_A,
    DEFAULT_K,
    DEFAULT_R,
    DEFAULT_SIGMA,
    DEFAULT_SIGMA0_SQ,
    DEFAULT_T,
    DEFAULT_Y0,
)

# (t, y) points of the oracle comparisons
SWEEP_TIMES = (0.0, 0.125, 0.25, 0.375)
SWEEP_STATES = (-0.3, 0.0, 0.174, 0.35, 0.6)


@pytest.fixture(scope="session")
def params():
    return MarketParams(r=DEFAULT_R, sigma=DEFAULT_SIGMA, T=DEFAULT_T, k=DEFAULT_K, a=DEFAULT_A)


@pytest.fixture(scope="session")
def params_a0(params):
    return replace(params, a=0.0)


@pytest.fixture(scope="session")
def prior():
    return Prior(y0=DEFAULT_Y0, sigma0_sq=DEFAULT_SIGMA0_SQ)


@pytest.fixture(scope="session")
def degenerate_prior():
    return Prior(y0=DEFAULT_Y0, sigma0_sq=0.0)


@pytest.fixture(scope="session")
def quad_cfg():
    return QuadratureConfig()


@pytest.fixture(scope="session")
def wide_grid():
    """401 x 401 nodes on y in [-1, 1]."""
    return GridSpec(-1.0, 1.0, 401, 401)


@pytest.fixture(scope="session")
def fd_surface(params, prior, wide_grid):
    return solve_f(params, prior, wide_grid)


@pytest.fixture(scope="session")
def fd_surface_a0(params_a0, prior, wide_grid):
    return solve_f(params_a0, prior, wide_grid)


@pytest.fixture(scope="session")
def quad_surface_t0(params, prior, wide_grid):
    """Quadrature surface on the same states, rows t = 0 and t = T."""
    return tabulate_surface(params, prior, wide_grid, times=[0.0, params.T])


@pytest.fixture(scope="session")
def fine_surface(params, prior):
    """h = 5e-4 on y in [-0.8, 0.8]; resolves region boundaries next to the band."""
    return solve_f(params, prior, GridSpec(-0.8, 0.8, 3201, 801))
