# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# __init__.py - 패키지 초기화
# ==============================================================================

"""
robustport v1.0: Robust Portfolio Selection with Learning

A numerical engine for a CARA investor who learns an unknown stock drift
by Bayesian filtering and guards against the worst drift inside a
confidence set that shrinks as information accumulates.
"""

from .config import __version__, __author__, configure_logging
from .enums import *
from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    NumericalFailure,
    NumericalWarning,
    PriceParseError,
    RegionNotFoundError,
    RobustPortError,
    SurfaceCoverageError,
)
from .models import (
    AdmissibilityResult,
    AdmissibilityWitness,
    BeliefState,
    ConfidenceInterval,
    GridSpec,
    MarketParams,
    PriceSeries,
    Prior,
    QuadratureConfig,
    RegionLabel,
    RunConfig,
    ScenarioConfig,
    SimulationResult,
    SolutionSurface,
    StrategyDecision,
)
from .market_model import (
    confidence_level,
    confidence_set,
    filter_price_path,
    gamma_at,
    posterior_from_logprice,
    recursive_filter,
    y_marginal_law,
)
from .analytic_oracles import (
    closed_form_a0,
    expected_source,
    f_mc,
    f_quadrature,
    fy_quadrature,
    gaussian_upper_linear_moment,
    gaussian_upper_quadratic_moment,
    merton_strategy,
    partial_info_strategy,
    tabulate_surface,
)
from .pde_engine import solve_f, source_g_tilde, surface_lookup
from .strategy import (
    admissibility_lhs,
    check_admissibility,
    classify_regions,
    robust_feedback,
    robust_value_at,
    value_function,
    worst_case_mu,
    worst_case_selector,
)
from .agents import Agent, ConstantAgent, MertonAgent, PartialInfoAgent, RobustAgent, build_agents
from .simulator import simulate, utility_report
from .data_loader import estimate_params, load_price_csv, load_run_config
from .analysis import load_surface_csv, surface_frame, write_frame

__all__ = [
    # Version info
    '__version__',
    '__author__',
    'configure_logging',

    # Enums
    'Regime',
    'TradeRegion',
    'QuadratureRule',
    'Provenance',
    'DriftMode',
    'StrategyKind',
    'SweepParameter',
    'OutputFormat',
    'ExitCode',

    # Errors
    'RobustPortError',
    'DomainError',
    'SurfaceCoverageError',
    'RegionNotFoundError',
    'ConfigError',
    'CalibrationError',
    'PriceParseError',
    'NumericalFailure',
    'NumericalWarning',

    # Models
    'MarketParams',
    'Prior',
    'BeliefState',
    'ConfidenceInterval',
    'QuadratureConfig',
    'GridSpec',
    'SolutionSurface',
    'StrategyDecision',
    'RegionLabel',
    'AdmissibilityWitness',
    'AdmissibilityResult',
    'ScenarioConfig',
    'SimulationResult',
    'PriceSeries',
    'RunConfig',

    # Market model
    'gamma_at',
    'posterior_from_logprice',
    'confidence_set',
    'confidence_level',
    'y_marginal_law',
    'filter_price_path',
    'recursive_filter',

    # Oracles
    'gaussian_upper_quadratic_moment',
    'gaussian_upper_linear_moment',
    'expected_source',
    'f_quadrature',
    'fy_quadrature',
    'tabulate_surface',
    'f_mc',
    'closed_form_a0',
    'merton_strategy',
    'partial_info_strategy',

    # PDE engine
    'source_g_tilde',
    'solve_f',
    'surface_lookup',

    # Strategy
    'worst_case_mu',
    'worst_case_selector',
    'robust_feedback',
    'classify_regions',
    'value_function',
    'robust_value_at',
    'admissibility_lhs',
    'check_admissibility',

    # Agents and simulation
    'Agent',
    'RobustAgent',
    'PartialInfoAgent',
    'MertonAgent',
    'ConstantAgent',
    'build_agents',
    'simulate',
    'utility_report',

    # Data and exports
    'load_price_csv',
    'estimate_params',
    'load_run_config',
    'surface_frame',
    'write_frame',
    'load_surface_csv',
]
