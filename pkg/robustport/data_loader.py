# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# data_loader.py - 데이터 로딩 및 보정
# ==============================================================================

"""
Data loading module for robustport v1.0
Reads closing-price CSV files, calibrates the market by maximum likelihood
and builds RunConfig objects from JSON documents and command line overrides.
"""

import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from .config import (
    DEFAULT_A,
    DEFAULT_DELTA_YEARS,
    DEFAULT_K,
    DEFAULT_R,
    DEFAULT_SIGMA,
    DEFAULT_SIGMA0_SQ,
    DEFAULT_T,
    DEFAULT_Y0,
    MIN_CALIBRATION_POINTS,
)
from .enums import DriftMode, OutputFormat, QuadratureRule
from .errors import CalibrationError, ConfigError, PriceParseError
from .models import GridSpec, MarketParams, PriceSeries, Prior, QuadratureConfig, RunConfig, ScenarioConfig

logger = logging.getLogger(__name__)

PRICE_COLUMNS = ("date", "close")


# ------------------------------------------------------------------------------
# Price data
# ------------------------------------------------------------------------------

def load_price_csv(path, delta_years=DEFAULT_DELTA_YEARS):
    """
    Load a `date,close` CSV of closing prices.

    Dates must be ISO-8601 and strictly increasing; closes must be positive.
    Errors name the offending file row (the header is row 1).

    Returns:
        PriceSeries
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise PriceParseError(f"{path}: cannot read price file ({exc})") from exc
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    missing = [c for c in PRICE_COLUMNS if c not in frame.columns]
    if missing:
        raise PriceParseError(f"{path}: header must contain {','.join(PRICE_COLUMNS)}; missing {missing}")

    dates, closes = [], []
    for offset, (raw_date, raw_close) in enumerate(zip(frame["date"], frame["close"])):
        row = offset + 2
        try:
            stamp = pd.Timestamp(raw_date.strip())
        except ValueError as exc:
            raise PriceParseError(f"{path}: row {row}: bad date {raw_date!r}") from exc
        try:
            close = float(raw_close)
        except ValueError as exc:
            raise PriceParseError(f"{path}: row {row}: bad close {raw_close!r}") from exc
        if not math.isfinite(close) or close <= 0:
            raise PriceParseError(f"{path}: row {row}: close must be positive, got {raw_close!r}")
        if dates and stamp <= dates[-1]:
            raise PriceParseError(f"{path}: row {row}: date {raw_date} does not increase")
        dates.append(stamp)
        closes.append(close)

    if not closes:
        raise PriceParseError(f"{path}: no price rows")
    logger.info("loaded %d prices from %s", len(closes), path)
    return PriceSeries(tuple(d.date().isoformat() for d in dates), np.array(closes), delta_years)


def estimate_params(series):
    """
    Maximum likelihood calibration of a geometric Brownian motion.

    With log returns u and sampling interval delta:
        sigma^2 = var(u) / delta      (MLE, divisor n)
        y0 = mean(u) / delta + sigma^2 / 2
        sigma0^2 = sigma^2 / (n delta)  (sampling variance of the drift MLE)

    Returns:
        (sigma_hat, y0_hat, sigma0_sq_hat)
    """
    prices = np.asarray(series.prices, dtype=float)
    bad = np.flatnonzero(~(prices > 0))
    if bad.size:
        raise PriceParseError(f"row {int(bad[0]) + 2}: close must be positive, got {prices[bad[0]]}")
    if len(series) < MIN_CALIBRATION_POINTS:
        raise CalibrationError(f"need at least {MIN_CALIBRATION_POINTS} prices, got {len(series)}")
    if series.delta_years <= 0:
        raise CalibrationError(f"delta_years must be > 0, got {series.delta_years}")

    returns = series.log_returns()
    n = returns.size
    delta = series.delta_years
    mean = returns.mean()
    variance = np.mean((returns - mean) ** 2)
    if variance <= 0:
        raise CalibrationError("price series has zero variance; sigma cannot be estimated")
    sigma_sq = variance / delta
    y0 = mean / delta + 0.5 * sigma_sq
    sigma0_sq = sigma_sq / (n * delta)
    logger.info("calibrated sigma=%.6g y0=%.6g sigma0^2=%.6g from %d returns", math.sqrt(sigma_sq), y0, sigma0_sq, n)
    return math.sqrt(sigma_sq), float(y0), float(sigma0_sq)


# ------------------------------------------------------------------------------
# Run configuration
# ------------------------------------------------------------------------------

DEFAULT_SECTIONS = {
    "market": {"r": DEFAULT_R, "sigma": DEFAULT_SIGMA, "T": DEFAULT_T, "k": DEFAULT_K, "a": DEFAULT_A},
    "prior": {"y0": DEFAULT_Y0, "sigma0_sq": DEFAULT_SIGMA0_SQ},
}
SECTION_FIELDS = {
    "market": ("r", "sigma", "T", "k", "a"),
    "prior": ("y0", "sigma0_sq"),
    "grid": ("y_min", "y_max", "n_y", "n_t", "theta"),
    "quadrature": ("n_time_nodes", "rule", "abs_tol"),
    "scenario": ("n_paths", "n_steps", "seed", "drift_mode", "fixed_mu", "initial_wealth", "n_workers",
                 "keep_paths"),
}
TOP_LEVEL_FIELDS = ("output_dir", "output_format")


def _enum(cls, value, field):
    if isinstance(value, cls):
        return value
    for member in cls:
        if value in (member.value, member.name):
            return member
    choices = ", ".join(m.value for m in cls)
    raise ConfigError(f"{field}: unknown value {value!r}; expected one of {choices}")


def _read_document(path):
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return document


def _merge(document, overrides):
    """Apply dotted-key overrides such as {"market.a": 0.0} to a copy of the document."""
    merged = {key: dict(value) if isinstance(value, dict) else value for key, value in document.items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if "." in key:
            section, field = key.split(".", 1)
            merged.setdefault(section, {})
            if not isinstance(merged[section], dict):
                raise ConfigError(f"{section}: must be a JSON object")
            merged[section][field] = value
        else:
            merged[key] = value
    return merged


def _build(cls, name, values):
    unknown = sorted(set(values) - set(SECTION_FIELDS[name]))
    if unknown:
        raise ConfigError(f"{name}: unknown field(s) {', '.join(unknown)}")
    try:
        return cls(**values)
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def load_run_config(path=None, overrides=None):
    """
    Build a RunConfig from a JSON document plus command line overrides.

    Missing market/prior sections fall back to the reference calibration and
    a missing grid lets every command derive its own default grid.  Every
    invalid value raises ConfigError with a one-line message.
    """
    document = _merge(_read_document(path), overrides)
    unknown = sorted(set(document) - set(SECTION_FIELDS) - set(TOP_LEVEL_FIELDS))
    if unknown:
        raise ConfigError(f"config: unknown section(s) {', '.join(unknown)}")
    for name in SECTION_FIELDS:
        if name in document and not isinstance(document[name], dict):
            raise ConfigError(f"{name}: must be a JSON object")

    market = _build(MarketParams, "market", {**DEFAULT_SECTIONS["market"], **document.get("market", {})})
    prior = _build(Prior, "prior", {**DEFAULT_SECTIONS["prior"], **document.get("prior", {})})
    grid = None
    if document.get("grid"):
        fallback = GridSpec.default_for(market, prior)
        grid = _build(GridSpec, "grid", {"y_min": fallback.y_min, "y_max": fallback.y_max, **document["grid"]})

    quadrature = dict(document.get("quadrature", {}))
    if "rule" in quadrature:
        quadrature["rule"] = _enum(QuadratureRule, quadrature["rule"], "quadrature.rule")
    scenario = dict(document.get("scenario", {}))
    if "drift_mode" in scenario:
        scenario["drift_mode"] = _enum(DriftMode, scenario["drift_mode"], "scenario.drift_mode")

    output_format = _enum(OutputFormat, document.get("output_format", OutputFormat.csv.value), "output_format")
    config = RunConfig(
        market=market,
        prior=prior,
        grid=grid,
        quadrature=_build(QuadratureConfig, "quadrature", quadrature),
        scenario=_build(ScenarioConfig, "scenario", scenario),
        output_dir=Path(document.get("output_dir", "results")),
        output_format=output_format,
    )
    logger.debug("run config: %s", config)
    return config
