# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# enums.py - Enum 정의
# ==============================================================================

"""
Enumeration definitions for robustport v1.0
Provides type safety and clarity for regimes, backends and run options.
"""

from enum import Enum


class Regime(Enum):
    """Position of the risk-free rate relative to the confidence set."""
    BelowSet = "BelowSet"  # r below the set: long myopic demand
    InSet = "InSet"  # r inside the set: hedging demand only
    AboveSet = "AboveSet"  # r above the set: short myopic demand


class TradeRegion(Enum):
    """Sign regions of the robust feedback at fixed time."""
    Sell = "Sell"
    SmallTrade = "SmallTrade"
    Buy = "Buy"


class QuadratureRule(Enum):
    """Outer time-integral rule of the quadrature oracle."""
    Simpson = "composite-Simpson"
    Adaptive = "adaptive"


class Provenance(Enum):
    """How a solution surface was produced."""
    FiniteDifference = "finite-difference"
    Quadrature = "quadrature"


class DriftMode(Enum):
    """How the true drift is chosen in a simulated scenario."""
    PriorDraw = "PriorDraw"
    Fixed = "Fixed"
    WorstCase = "WorstCase"


class StrategyKind(Enum):
    """Investment strategies the simulator can run."""
    Robust = "robust"
    PartialInfo = "partial-info"
    Merton = "merton"
    Constant = "constant"


class SweepParameter(Enum):
    """Parameters supported by the sensitivity sweep."""
    a = "a"
    sigma0_sq = "sigma0_sq"
    sigma = "sigma"


class OutputFormat(Enum):
    """Export file formats."""
    csv = "csv"
    json = "json"


class ExitCode(Enum):
    """Process exit codes of the command line runner."""
    SUCCESS = 0
    CONFIG_ERROR = 1
    NUMERICAL_FAILURE = 2
    NOT_ADMISSIBLE = 3
