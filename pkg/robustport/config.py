# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# config.py - 환경 설정 및 상수
# ==============================================================================

"""
Configuration module for robustport v1.0
Contains global constants, numerical defaults and the logging setup.
"""

import logging

# Version information
__version__ = "1.0.0"
__author__ = "robustport Development Team"

# Reference market calibration (annualized units)
DEFAULT_R = 0.018  # Average overnight bank funding rate
DEFAULT_SIGMA = 0.213  # Volatility of the risky asset
DEFAULT_T = 0.5  # Investment horizon (years)
DEFAULT_K = 1.0  # CARA risk aversion
DEFAULT_A = 1.96  # 95% confidence set
DEFAULT_Y0 = 0.174  # Prior mean of the drift
DEFAULT_SIGMA0_SQ = 0.00908  # Prior variance of the drift

# Data conventions
TRADING_DAYS_PER_YEAR = 252
DEFAULT_DELTA_YEARS = 1.0 / TRADING_DAYS_PER_YEAR
MIN_CALIBRATION_POINTS = 30

# Quadrature oracle
SIMPSON_NODES = 201
ADAPTIVE_ABS_TOL = 1e-10
ADAPTIVE_MAX_SUBDIVISIONS = 200

# Monte Carlo oracle / simulator
MC_STEPS = 500
MC_MIN_PATHS = 100
MC_BLOCK_SIZE = 4096  # Paths per seed block; fixes the counter-based seed split
NON_FINITE_ALERT_RATE = 0.001

# Finite-difference solver
GRID_N_Y = 401
GRID_N_T = 401
GRID_THETA = 0.5  # Crank-Nicolson
GRID_MIN_N_Y = 11
GRID_MIN_N_T = 2
GRID_HALF_WIDTH_STD = 8.0  # Default domain r -/+ 8 prior standard deviations
GRID_COVER_STD = 6.0
PECLET_LIMIT = 2.0

# Strategy / regions
BISECTION_XTOL = 1e-10
ADMISSIBILITY_DELTA1_RANGE = (1.0 + 1e-4, 4.0)
ADMISSIBILITY_DELTA7_RANGE = (1.0 + 1e-4, 10.0)
ADMISSIBILITY_EPS3_RANGE = (1e-2, 1e2)
ADMISSIBILITY_BUDGET = 100_000

# Sweeps
SWEEP_Y_POINTS = (0.5,)

# Output
REPORT_WIDTH = 100

# Logging
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
DEFAULT_LOG_LEVEL = "WARNING"


def configure_logging(level=DEFAULT_LOG_LEVEL):
    """Install the package-wide log handler."""
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("robustport").setLevel(level)
