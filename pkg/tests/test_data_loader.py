"""Tests for price loading, calibration and run configuration."""

import json
import math

import numpy as np
import pandas as pd
import pytest

from robustport import (
    CalibrationError,
    ConfigError,
    DriftMode,
    OutputFormat,
    PriceParseError,
    QuadratureRule,
    estimate_params,
    load_price_csv,
    load_run_config,
)
from robustport.config import DEFAULT_DELTA_YEARS, DEFAULT_A, DEFAULT_SIGMA0_SQ
from robustport.models import PriceSeries


def _write_prices(path, closes, start="2020-01-02"):
    dates = pd.bdate_range(start, periods=len(closes))
    frame = pd.DataFrame({"date": dates.strftime("%Y-%m-%d"), "close": closes})
    frame.to_csv(path, index=False)
    return path


def _gbm(n, sigma=0.2, mu=0.1, seed=2024):
    rng = np.random.default_rng(seed)
    delta = DEFAULT_DELTA_YEARS
    steps = (mu - 0.5 * sigma ** 2) * delta + sigma * math.sqrt(delta) * rng.standard_normal(n - 1)
    return 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(steps)]))


class TestLoadPrices:
    def test_round_trip(self, tmp_path):
        closes = _gbm(40)
        series = load_price_csv(_write_prices(tmp_path / "prices.csv", closes))
        assert len(series) == 40
        assert series.timestamps[0] == "2020-01-02"
        assert np.allclose(series.prices, closes, rtol=1e-12)

    def test_bad_close_names_row(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date,close\n2020-01-02,100\n2020-01-03,abc\n", encoding="utf-8")
        with pytest.raises(PriceParseError, match="row 3"):
            load_price_csv(path)

    def test_bad_date_names_row(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date,close\n2020-01-02,100\nnot-a-date,101\n", encoding="utf-8")
        with pytest.raises(PriceParseError, match="row 3"):
            load_price_csv(path)

    def test_non_positive_close(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date,close\n2020-01-02,100\n2020-01-03,0\n", encoding="utf-8")
        with pytest.raises(PriceParseError, match="positive"):
            load_price_csv(path)

    def test_dates_must_increase(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date,close\n2020-01-03,100\n2020-01-02,101\n", encoding="utf-8")
        with pytest.raises(PriceParseError, match="does not increase"):
            load_price_csv(path)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("date,price\n2020-01-02,100\n", encoding="utf-8")
        with pytest.raises(PriceParseError, match="close"):
            load_price_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(PriceParseError):
            load_price_csv(tmp_path / "absent.csv")


class TestEstimateParams:
    def test_recovers_volatility(self):
        sigma_hat, _, _ = estimate_params(PriceSeries(("",) * 2520, _gbm(2520)))
        assert sigma_hat == pytest.approx(0.2, abs=0.01)

    def test_drift_and_prior_variance(self):
        prices = _gbm(500, seed=7)
        sigma_hat, y0_hat, sigma0_sq_hat = estimate_params(PriceSeries(("",) * 500, prices))
        returns = np.diff(np.log(prices))
        assert y0_hat == pytest.approx(returns.mean() / DEFAULT_DELTA_YEARS + 0.5 * sigma_hat ** 2, rel=1e-12)
        assert sigma0_sq_hat == pytest.approx(sigma_hat ** 2 / (returns.size * DEFAULT_DELTA_YEARS), rel=1e-12)

    def test_too_few_prices(self):
        with pytest.raises(CalibrationError):
            estimate_params(PriceSeries(("",) * 29, _gbm(29)))

    def test_constant_series(self):
        with pytest.raises(CalibrationError, match="variance"):
            estimate_params(PriceSeries(("",) * 40, np.full(40, 50.0)))

    def test_negative_price(self):
        prices = _gbm(40)
        prices[5] = -1.0
        with pytest.raises(PriceParseError, match="row 7"):
            estimate_params(PriceSeries(("",) * 40, prices))


class TestRunConfig:
    def test_defaults(self):
        cfg = load_run_config()
        assert cfg.market.a == DEFAULT_A
        assert cfg.prior.sigma0_sq == DEFAULT_SIGMA0_SQ
        assert cfg.grid is None
        assert cfg.output_format is OutputFormat.csv

    def test_document_and_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({
            "market": {"a": 0.0},
            "prior": {"y0": 0.2},
            "quadrature": {"rule": "adaptive"},
            "scenario": {"drift_mode": "Fixed", "fixed_mu": 0.05},
            "output_format": "json",
        }), encoding="utf-8")
        cfg = load_run_config(path, {"market.a": 1.0, "scenario.n_paths": 64, "prior.y0": None})
        assert cfg.market.a == 1.0
        assert cfg.prior.y0 == 0.2
        assert cfg.quadrature.rule is QuadratureRule.Adaptive
        assert cfg.scenario.drift_mode is DriftMode.Fixed
        assert cfg.scenario.n_paths == 64
        assert cfg.output_format is OutputFormat.json

    def test_partial_grid_filled(self):
        cfg = load_run_config(overrides={"grid.n_y": 101, "grid.n_t": 51})
        assert cfg.grid.n_y == 101
        assert cfg.grid.y_min < cfg.market.r < cfg.grid.y_max

    def test_grid_must_cover_belief_mass(self):
        with pytest.raises(ConfigError, match="grid"):
            load_run_config(overrides={"grid.y_min": -0.1, "grid.y_max": 0.1})

    @pytest.mark.parametrize("overrides, match", [
        ({"market.alpha": 1.0}, "unknown field"),
        ({"plots": {}}, "unknown section"),
        ({"market.sigma": -0.1}, "sigma"),
        ({"quadrature.rule": "trapezoid"}, "quadrature.rule"),
        ({"output_format": "xml"}, "output_format"),
        ({"scenario.drift_mode": "Fixed"}, "fixed_mu"),
        ({"grid": {"n_y": 41.5}}, "grid.n_y must be an integer"),
        ({"scenario": {"seed": "abc"}}, "scenario.seed must be an integer"),
        ({"scenario.n_paths": True}, "scenario.n_paths must be an integer"),
        ({"quadrature.n_time_nodes": 65.0}, "quadrature.n_time_nodes must be an integer"),
        ({"scenario.seed": -1}, "scenario.seed must be >= 0"),
    ])
    def test_invalid_values(self, overrides, match):
        with pytest.raises(ConfigError, match=match):
            load_run_config(overrides=overrides)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{\"market\": ", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_run_config(path)

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.json")
