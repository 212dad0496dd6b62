# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# models.py - 핵심 데이터 모델 클래스
# ==============================================================================

"""
Core data model classes for robustport v1.0
Immutable value types shared by the filter, the solvers, the strategy layer,
the simulator and the command line runner.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .config import (
    GRID_COVER_STD,
    GRID_HALF_WIDTH_STD,
    GRID_MIN_N_T,
    GRID_MIN_N_Y,
    GRID_N_T,
    GRID_N_Y,
    GRID_THETA,
    ADAPTIVE_ABS_TOL,
    SIMPSON_NODES,
    MC_STEPS,
    DEFAULT_DELTA_YEARS,
)
from .enums import DriftMode, OutputFormat, Provenance, QuadratureRule, Regime, TradeRegion
from .errors import ConfigError, SurfaceCoverageError


def _require(condition, message):
    if not condition:
        raise ConfigError(message)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


def _integer(name, value):
    _require(isinstance(value, (int, np.integer)) and not isinstance(value, bool),
             f"{name} must be an integer, got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    """
    Market and preference constants.

    Attributes:
        r (float): Risk-free rate per year
        sigma (float): Volatility per sqrt(year)
        T (float): Horizon in years
        k (float): CARA risk aversion
        a (float): Confidence multiplier of the drift set
    """

    r: float
    sigma: float
    T: float
    k: float
    a: float

    def __post_init__(self):
        _require(_finite(self.r, self.sigma, self.T, self.k, self.a),
                 f"market: all parameters must be finite, got {self}")
        _require(self.sigma > 0, f"market.sigma must be > 0, got {self.sigma}")
        _require(self.T > 0, f"market.T must be > 0, got {self.T}")
        _require(self.k > 0, f"market.k must be > 0, got {self.k}")
        _require(self.a >= 0, f"market.a must be >= 0, got {self.a}")


@dataclass(frozen=True)
class Prior:
    """
    Gaussian prior N(y0, sigma0_sq) on the unknown drift.

    A zero variance is the no-uncertainty case: the drift is known to be y0.
    """

    y0: float
    sigma0_sq: float

    def __post_init__(self):
        _require(_finite(self.y0, self.sigma0_sq), f"prior: values must be finite, got {self}")
        _require(self.sigma0_sq >= 0, f"prior.sigma0_sq must be >= 0, got {self.sigma0_sq}")

    @property
    def degenerate(self):
        return self.sigma0_sq == 0.0

    @property
    def sigma0(self):
        return math.sqrt(self.sigma0_sq)


@dataclass(frozen=True)
class BeliefState:
    """Posterior mean y and variance gamma of the drift at time t."""

    t: float
    y: float
    gamma: float


@dataclass(frozen=True)
class ConfidenceInterval:
    """The drift set [mu_min, mu_max] around the posterior mean."""

    mu_min: float
    mu_max: float

    @property
    def midpoint(self):
        return 0.5 * (self.mu_min + self.mu_max)

    @property
    def half_width(self):
        return 0.5 * (self.mu_max - self.mu_min)

    def contains(self, value):
        return self.mu_min <= value <= self.mu_max


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Outer time-integral settings of the quadrature oracle.

    Attributes:
        n_time_nodes (int): Simpson node count (odd, >= 3)
        rule (QuadratureRule): Composite Simpson or adaptive
        abs_tol (float): Absolute tolerance of the adaptive rule
    """

    n_time_nodes: int = SIMPSON_NODES
    rule: QuadratureRule = QuadratureRule.Simpson
    abs_tol: float = ADAPTIVE_ABS_TOL

    def __post_init__(self):
        _integer("quadrature.n_time_nodes", self.n_time_nodes)
        _require(self.n_time_nodes >= 3, f"quadrature.n_time_nodes must be >= 3, got {self.n_time_nodes}")
        if self.rule is QuadratureRule.Simpson:
            _require(self.n_time_nodes % 2 == 1,
                     f"quadrature.n_time_nodes must be odd for Simpson, got {self.n_time_nodes}")
        _require(self.abs_tol > 0, f"quadrature.abs_tol must be > 0, got {self.abs_tol}")


@dataclass(frozen=True)
class A0Coefficients:
    """f(t, y) = f1 y^2 + f2 y + f3 when the confidence set is a single point."""

    t: float
    f1: float
    f2: float
    f3: float

    def value(self, y):
        return self.f1 * y * y + self.f2 * y + self.f3

    def derivative(self, y):
        return 2.0 * self.f1 * y + self.f2


@dataclass(frozen=True)
class GridSpec:
    """
    Rectangular (t, y) grid of the finite-difference solver.

    Attributes:
        y_min (float): Lower state bound
        y_max (float): Upper state bound
        n_y (int): Number of state nodes
        n_t (int): Number of time nodes
        theta (float): Time-stepping weight (0.5 Crank-Nicolson, 1 implicit Euler)
    """

    y_min: float
    y_max: float
    n_y: int = GRID_N_Y
    n_t: int = GRID_N_T
    theta: float = GRID_THETA

    def __post_init__(self):
        _integer("grid.n_y", self.n_y)
        _integer("grid.n_t", self.n_t)
        _require(_finite(self.y_min, self.y_max), "grid: bounds must be finite")
        _require(self.y_min < self.y_max, f"grid.y_min must be < grid.y_max, got {self.y_min} >= {self.y_max}")
        _require(self.n_y >= GRID_MIN_N_Y, f"grid.n_y must be >= {GRID_MIN_N_Y}, got {self.n_y}")
        _require(self.n_t >= GRID_MIN_N_T, f"grid.n_t must be >= {GRID_MIN_N_T}, got {self.n_t}")
        _require(0.0 <= self.theta <= 1.0, f"grid.theta must lie in [0, 1], got {self.theta}")

    @classmethod
    def default_for(cls, params, prior, y_range=None, n_y=GRID_N_Y, n_t=GRID_N_T, theta=GRID_THETA):
        """Grid on r -/+ 8 prior standard deviations, widened to cover y_range."""
        half = GRID_HALF_WIDTH_STD * prior.sigma0
        if half == 0.0:
            half = 1.0
        y_min, y_max = params.r - half, params.r + half
        if y_range is not None:
            y_min = min(y_min, y_range[0])
            y_max = max(y_max, y_range[1])
        return cls(y_min, y_max, n_y, n_t, theta)

    def states(self):
        return np.linspace(self.y_min, self.y_max, self.n_y)

    def times(self, T):
        return np.linspace(0.0, T, self.n_t)

    def required_range(self, params, prior):
        half = (GRID_COVER_STD + params.a) * prior.sigma0
        return params.r - half, params.r + half

    def check_coverage(self, params, prior, y_range=None):
        """Raise SurfaceCoverageError unless the grid holds the belief mass and y_range."""
        lo, hi = self.required_range(params, prior)
        if y_range is not None:
            lo, hi = min(lo, y_range[0]), max(hi, y_range[1])
        if lo < self.y_min or hi > self.y_max:
            raise SurfaceCoverageError(
                f"grid [{self.y_min}, {self.y_max}] does not cover required range [{lo:.6g}, {hi:.6g}]")


@dataclass(frozen=True)
class SolutionSurface:
    """
    Gridded f(t, y) and f_y(t, y) with provenance.

    Rows of f and f_y are time nodes (ascending), columns are state nodes.
    """

    grid: GridSpec
    times: np.ndarray
    states: np.ndarray
    f: np.ndarray
    f_y: np.ndarray
    provenance: Provenance
    warnings: Tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("times", "states", "f", "f_y"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.f.shape != (self.times.size, self.states.size) or self.f_y.shape != self.f.shape:
            raise ConfigError(f"surface: shape mismatch {self.f.shape} vs ({self.times.size}, {self.states.size})")

    def covers(self, y_min, y_max):
        return self.states[0] <= y_min and y_max <= self.states[-1]


@dataclass(frozen=True)
class StrategyDecision:
    """
    The robust feedback at one (t, y) point.

    Attributes:
        pi (float): Dollar position in the risky asset (myopic + hedging)
        regime (Regime): Position of r relative to the confidence set
        mu_worst (float): Worst-case drift; the representative y when any_in_set
        any_in_set (bool): Any drift of the set is worst (InSet regime)
        myopic (float): Myopic demand under the worst case
        hedging (float): Hedging demand against belief changes
    """

    t: float
    y: float
    pi: float
    regime: Regime
    mu_worst: float
    any_in_set: bool
    myopic: float
    hedging: float


@dataclass(frozen=True)
class RegionLabel:
    """
    A trading region at fixed time.

    The SmallTrade region records its inner sign change at y = r in
    interior_points / interior_signs.
    """

    label: TradeRegion
    lower: float
    upper: float
    interior_points: Tuple[float, ...] = ()
    interior_signs: Tuple[str, ...] = ()


@dataclass(frozen=True)
class AdmissibilityWitness:
    """Constants for the integrability inequalities and the resulting left sides."""

    delta1: float
    delta7: float
    delta8: float
    epsilon3: float
    lhs1: float
    lhs2: float
    lhs2_alt: float

    @property
    def valid(self):
        return self.lhs1 < 1.0 and self.lhs2 < 1.0

    @property
    def valid_alt(self):
        return self.lhs1 < 1.0 and self.lhs2_alt < 1.0


@dataclass(frozen=True)
class AdmissibilityResult:
    """Outcome of the witness search; found is False when no witness exists in budget."""

    found: bool
    witness: AdmissibilityWitness
    evaluations: int


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Monte Carlo scenario settings.

    Attributes:
        n_paths (int): Number of simulated paths
        n_steps (int): Time steps per path
        seed (int): Master seed
        drift_mode (DriftMode): How the true drift is chosen
        fixed_mu (float): Drift for DriftMode.Fixed
        initial_wealth (float): x0
        n_workers (int): Threads used for path blocks
        keep_paths (bool): Keep per-path terminal wealth in the result
    """

    n_paths: int = 10_000
    n_steps: int = MC_STEPS
    seed: int = 20240101
    drift_mode: DriftMode = DriftMode.PriorDraw
    fixed_mu: Optional[float] = None
    initial_wealth: float = 1.0
    n_workers: int = 1
    keep_paths: bool = False

    def __post_init__(self):
        for name in ("n_paths", "n_steps", "seed", "n_workers"):
            _integer(f"scenario.{name}", getattr(self, name))
        _require(self.n_paths >= 1, f"scenario.n_paths must be >= 1, got {self.n_paths}")
        _require(self.n_steps >= 1, f"scenario.n_steps must be >= 1, got {self.n_steps}")
        _require(self.n_workers >= 1, f"scenario.n_workers must be >= 1, got {self.n_workers}")
        _require(self.seed >= 0, f"scenario.seed must be >= 0, got {self.seed}")
        _require(math.isfinite(self.initial_wealth), "scenario.initial_wealth must be finite")
        if self.drift_mode is DriftMode.Fixed:
            _require(self.fixed_mu is not None and math.isfinite(self.fixed_mu),
                     "scenario.fixed_mu must be a finite number when drift_mode is Fixed")


@dataclass(frozen=True)
class StrategyStats:
    """Terminal statistics of one strategy over all finite paths."""

    name: str
    mean_wealth: float
    wealth_variance: float
    mean_utility: float
    utility_std_error: float
    certainty_equivalent: float
    min_wealth: float
    max_wealth: float
    n_paths: int
    n_non_finite: int


@dataclass(frozen=True)
class SimulationResult:
    """Per-strategy statistics plus run diagnostics."""

    scenario: ScenarioConfig
    stats: Tuple[StrategyStats, ...]
    diagnostics: dict = field(default_factory=dict)
    terminal_wealth: Optional[dict] = None

    def by_name(self, name):
        for item in self.stats:
            if item.name == name:
                return item
        raise KeyError(name)


@dataclass(frozen=True)
class PriceSeries:
    """Observed closing prices sampled every delta_years."""

    timestamps: Tuple
    prices: np.ndarray
    delta_years: float = DEFAULT_DELTA_YEARS

    def __len__(self):
        return len(self.prices)

    def log_returns(self):
        return np.diff(np.log(np.asarray(self.prices, dtype=float)))


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one command line run needs.

    grid may be None, in which case each command derives the default grid.
    """

    market: MarketParams
    prior: Prior
    grid: Optional[GridSpec] = None
    quadrature: QuadratureConfig = QuadratureConfig()
    scenario: ScenarioConfig = ScenarioConfig()
    output_dir: Path = Path("results")
    output_format: OutputFormat = OutputFormat.csv

    def __post_init__(self):
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.grid is not None:
            try:
                self.grid.check_coverage(self.market, self.prior)
            except SurfaceCoverageError as exc:
                raise ConfigError(f"grid: {exc}") from exc

    def resolved_grid(self, y_range=None):
        if self.grid is not None:
            return self.grid
        return GridSpec.default_for(self.market, self.prior, y_range)
