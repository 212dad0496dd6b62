"""End-to-end tests of the subcommands and the command line runner."""

import json
import math

import numpy as np
import pandas as pd
import pytest

import run_robust
from robustport import ExitCode, Regime, load_run_config, load_surface_csv
from robustport.commands import (
    run_check,
    run_estimate,
    run_export_surface,
    run_simulate,
    run_solve,
    run_strategy_at,
    sweep_table,
)

SMALL_GRID = {"grid.n_y": 201, "grid.n_t": 41}


def _config(tmp_path, **overrides):
    return load_run_config(overrides={"output_dir": str(tmp_path), **overrides})


@pytest.fixture(scope="module")
def solved(tmp_path_factory):
    out = tmp_path_factory.mktemp("solve")
    return run_solve(_config(out, **SMALL_GRID))


class TestSolve:
    def test_files(self, solved):
        assert [path.name for path in solved.files] == ["surface.csv", "regions.csv"]

    def test_byte_deterministic(self, solved, tmp_path):
        again = run_solve(_config(tmp_path, **SMALL_GRID))
        for first, second in zip(solved.files, again.files):
            assert first.read_bytes() == second.read_bytes()

    def test_lf_line_endings(self, solved):
        assert b"\r\n" not in solved.files[0].read_bytes()

    def test_terminal_rows_zero(self, solved):
        frame = pd.read_csv(solved.files[0])
        terminal = frame[frame["t"] == frame["t"].max()]
        assert (terminal["f"] == 0.0).all() and (terminal["f_y"] == 0.0).all()

    def test_regions_bracket_band(self, solved):
        frame = pd.read_csv(solved.files[1])
        assert len(frame) == 40
        assert (frame["y_low"] <= frame["band_low"]).all()
        assert (frame["band_low"] < frame["inner"]).all() and (frame["inner"] < frame["band_high"]).all()
        assert (frame["band_high"] <= frame["y_high"]).all()
        first = frame.iloc[0]
        assert first["y_low"] < first["band_low"] and first["band_high"] < first["y_high"]

    def test_surface_round_trip(self, solved):
        loaded = load_surface_csv(solved.files[0])
        assert np.array_equal(loaded.f, solved.result.f)
        assert np.array_equal(loaded.f_y, solved.result.f_y)
        assert np.array_equal(loaded.states, solved.result.states)

    def test_regime_column(self, solved):
        frame = pd.read_csv(solved.files[0])
        assert set(frame["regime"]) == {r.value for r in Regime}


class TestStrategyAt:
    def test_quadrature_backend(self, tmp_path):
        output = run_strategy_at(_config(tmp_path), 0.0, 0.5, backend="quadrature")
        assert output.result.regime is Regime.BelowSet
        assert output.result.mu_worst == pytest.approx(0.313234, abs=1e-6)
        assert "BelowSet" in output.report

    def test_backends_agree(self, tmp_path):
        cfg = _config(tmp_path)
        fd = run_strategy_at(cfg, 0.0, 0.3, backend="fd").result
        quad = run_strategy_at(cfg, 0.0, 0.3, backend="quadrature").result
        assert fd.pi == pytest.approx(quad.pi, abs=1e-4)

    def test_degenerate_quadrature_backend(self, tmp_path):
        output = run_strategy_at(_config(tmp_path, **{"prior.sigma0_sq": 0.0}), 0.1, 0.174, backend="quadrature")
        assert output.result.hedging == 0.0


class TestSweep:
    def test_zero_width_is_partial_info(self, tmp_path):
        frame = sweep_table(_config(tmp_path), "a", [0.0], (0.1, 0.5))
        assert np.allclose(frame["pi_robust"], frame["pi_partial_info"], rtol=0, atol=1e-8)

    def test_no_uncertainty_is_merton(self, tmp_path):
        frame = sweep_table(_config(tmp_path), "sigma0_sq", [0.0], (0.1, 0.5))
        assert np.allclose(frame["pi_robust"], frame["pi_merton"], rtol=1e-12, atol=0)

    def test_robust_position_shrinks_with_width(self, tmp_path):
        frame = sweep_table(_config(tmp_path), "a", [0.0, 0.5, 1.0, 1.96], (0.5,))
        assert np.all(np.diff(frame["pi_robust"].to_numpy()) < 0)

    def test_invalid_value_recorded(self, tmp_path):
        frame = sweep_table(_config(tmp_path), "sigma", [-0.1, 0.213], (0.5,))
        assert frame.loc[0, "error"] != "" and math.isnan(frame.loc[0, "pi_robust"])
        assert frame.loc[1, "error"] == "" and math.isfinite(frame.loc[1, "pi_robust"])

    def test_unknown_parameter(self, tmp_path):
        with pytest.raises(ValueError):
            sweep_table(_config(tmp_path), "k", [1.0])


class TestOtherCommands:
    def test_check_json(self, tmp_path):
        output = run_check(_config(tmp_path, output_format="json"))
        rows = json.loads(output.files[0].read_text(encoding="utf-8"))
        assert rows[0]["found"] is True
        assert "reference" in output.report
        assert "confidence level 2N(a) - 1 = 0.9500" in output.report

    def test_estimate(self, tmp_path):
        rng = np.random.default_rng(3)
        closes = 50.0 * np.exp(np.cumsum(0.01 * rng.standard_normal(60)))
        dates = pd.bdate_range("2021-03-01", periods=60).strftime("%Y-%m-%d")
        prices = tmp_path / "prices.csv"
        pd.DataFrame({"date": dates, "close": closes}).to_csv(prices, index=False)
        output = run_estimate(prices, 1 / 252, _config(tmp_path))
        sigma_hat = output.result[0]
        frame = pd.read_csv(output.files[0])
        assert frame.loc[0, "sigma"] == pytest.approx(sigma_hat, rel=1e-15)
        assert frame.loc[0, "n_prices"] == 60

    def test_simulate_without_surface(self, tmp_path):
        cfg = _config(tmp_path, **{"scenario.n_paths": 300, "scenario.n_steps": 20, "scenario.keep_paths": True})
        output = run_simulate(cfg, ["partial-info", "merton"])
        assert [path.name for path in output.files] == ["simulation.csv", "terminal_wealth.csv"]
        wealth = pd.read_csv(output.files[1])
        assert list(wealth.columns) == ["partial-info", "merton"] and len(wealth) == 300

    def test_export_quadrature_surface(self, tmp_path):
        cfg = _config(tmp_path, **{"grid.n_y": 21, "grid.n_t": 3})
        output = run_export_surface(cfg, "quadrature")
        assert output.files[0].name == "surface_quadrature.csv"
        assert len(pd.read_csv(output.files[0])) == 63


class TestRunner:
    def test_check_succeeds(self, tmp_path):
        assert run_robust.main(["--quiet", "check", "--output-dir", str(tmp_path)]) == ExitCode.SUCCESS.value

    def test_check_without_witness(self, tmp_path):
        code = run_robust.main(["--quiet", "check", "--T", "50", "--budget", "8000", "--output-dir", str(tmp_path)])
        assert code == ExitCode.NOT_ADMISSIBLE.value

    def test_config_error(self, tmp_path, capsys):
        code = run_robust.main(["check", "--sigma", "-1", "--output-dir", str(tmp_path)])
        assert code == ExitCode.CONFIG_ERROR.value
        assert "sigma" in capsys.readouterr().err

    @pytest.mark.parametrize("document, field", [
        ({"grid": {"n_y": 41.5}}, "grid.n_y"),
        ({"scenario": {"seed": "abc"}}, "scenario.seed"),
    ])
    def test_non_integer_config_is_config_error(self, tmp_path, capsys, document, field):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        code = run_robust.main(["--config", str(path), "check", "--output-dir", str(tmp_path)])
        assert code == ExitCode.CONFIG_ERROR.value
        err = capsys.readouterr().err
        assert f"{field} must be an integer" in err and "Traceback" not in err

    def test_domain_error_is_numerical_exit(self, tmp_path):
        code = run_robust.main(["--quiet", "strategy-at", "--t", "0.9", "--y", "0.1", "--backend", "quadrature",
                                "--output-dir", str(tmp_path)])
        assert code == ExitCode.NUMERICAL_FAILURE.value

    def test_strategy_report_printed(self, tmp_path, capsys):
        code = run_robust.main(["strategy-at", "--t", "0", "--y", "0.5", "--backend", "quadrature",
                                "--output-dir", str(tmp_path)])
        assert code == 0
        assert "Robust feedback" in capsys.readouterr().out

    def test_overrides_collected(self):
        args = run_robust.build_parser().parse_args(["simulate", "--a", "0", "--n-y", "101", "--keep-paths"])
        overrides = run_robust.collect_overrides(args)
        assert overrides == {"market.a": 0.0, "grid.n_y": 101, "scenario.keep_paths": True}
