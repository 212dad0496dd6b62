"""Tests for the robust feedback, trading regions, value function and admissibility."""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.optimize import brentq

from robustport import (
    DomainError,
    GridSpec,
    NumericalFailure,
    Regime,
    RegionNotFoundError,
    TradeRegion,
    admissibility_lhs,
    check_admissibility,
    classify_regions,
    closed_form_a0,
    f_quadrature,
    fy_quadrature,
    gamma_at,
    merton_strategy,
    partial_info_strategy,
    robust_feedback,
    robust_value_at,
    tabulate_surface,
    value_function,
    worst_case_mu,
    worst_case_selector,
)
from robustport.strategy import _learning_gap, regime_of, robust_position

from .conftest import SWEEP_STATES, SWEEP_TIMES


def _band(params, prior, t):
    return params.a * math.sqrt(gamma_at(params, prior, t))


def _quadrature_pi(params, prior, t, y):
    return float(robust_position(params, prior, t, y, fy_quadrature(params, prior, t, y)))


class TestWorstCaseDrift:
    def test_regime_of_scalar_and_array(self, params, prior):
        assert regime_of(params, prior, 0.0, 0.5) is Regime.BelowSet
        assert regime_of(params, prior, 0.0, np.float64(-0.5)) is Regime.AboveSet
        regimes = regime_of(params, prior, 0.0, np.array([-0.5, 0.174, 0.5]))
        assert regimes.shape == (3,)
        assert list(regimes) == [Regime.AboveSet, Regime.InSet, Regime.BelowSet]

    def test_rate_inside_set(self, params, prior):
        regime, mu = worst_case_mu(params, prior, 0.0, 0.174)
        assert regime is Regime.InSet
        assert mu == 0.174

    def test_rate_below_set(self, params, prior):
        regime, mu = worst_case_mu(params, prior, 0.0, 0.5)
        assert regime is Regime.BelowSet
        assert mu == pytest.approx(0.313234, abs=1e-6)

    def test_rate_above_set(self, params, prior):
        regime, mu = worst_case_mu(params, prior, 0.0, -0.5)
        assert regime is Regime.AboveSet
        assert mu == pytest.approx(-0.5 + _band(params, prior, 0.0), rel=1e-14)

    @pytest.mark.parametrize("y, regime", [(0.3, Regime.BelowSet), (-0.1, Regime.AboveSet)])
    def test_zero_width(self, params_a0, prior, y, regime):
        assert worst_case_mu(params_a0, prior, 0.2, y) == (regime, y)

    def test_tie_is_in_set(self, params_a0, prior):
        assert worst_case_mu(params_a0, prior, 0.0, params_a0.r) == (Regime.InSet, params_a0.r)


class TestRobustFeedback:
    def test_in_set_is_hedging_only(self, params, prior):
        decision = robust_feedback(params, prior, 0.0, 0.174, fy_quadrature(params, prior, 0.0, 0.174))
        assert decision.regime is Regime.InSet
        assert decision.any_in_set
        assert decision.myopic == 0.0
        assert decision.pi == decision.hedging

    @pytest.mark.parametrize("t", SWEEP_TIMES)
    @pytest.mark.parametrize("y", SWEEP_STATES)
    def test_decomposition_exact(self, params, prior, t, y):
        decision = robust_feedback(params, prior, t, y, fy_quadrature(params, prior, t, y))
        assert decision.pi == decision.myopic + decision.hedging

    @pytest.mark.parametrize("t", [0.0, 0.3])
    @pytest.mark.parametrize("side", [-1.0, 1.0])
    def test_continuous_across_regime_boundary(self, params, prior, t, side):
        edge = params.r - side * _band(params, prior, t)
        below, above = edge - 1e-13, edge + 1e-13
        jump = _quadrature_pi(params, prior, t, above) - _quadrature_pi(params, prior, t, below)
        assert abs(jump) <= 1e-10

    @pytest.mark.parametrize("t", SWEEP_TIMES)
    @pytest.mark.parametrize("y", SWEEP_STATES)
    def test_ambiguity_bounds(self, params, prior, t, y):
        pi = _quadrature_pi(params, prior, t, y)
        neutral = partial_info_strategy(params, prior, t, y)
        shift = _band(params, prior, t) * math.exp(-params.r * (params.T - t)) / (params.k * params.sigma ** 2)
        if y > params.r:
            assert pi > neutral - shift
        else:
            assert pi < neutral + shift

    @pytest.mark.parametrize("t", [0.0, 0.25])
    @pytest.mark.parametrize("y", [-0.2, 0.1, 0.4])
    def test_zero_width_is_partial_info(self, params_a0, prior, t, y):
        f_y = closed_form_a0(params_a0, prior, t).derivative(y)
        decision = robust_feedback(params_a0, prior, t, y, f_y)
        assert decision.pi == pytest.approx(partial_info_strategy(params_a0, prior, t, y), abs=1e-10)

    @pytest.mark.parametrize("y", [-0.2, 0.1, 0.4])
    def test_small_width_close_to_partial_info(self, params, prior, y):
        narrow = replace(params, a=1e-6)
        pi = _quadrature_pi(narrow, prior, 0.0, y)
        assert pi == pytest.approx(partial_info_strategy(narrow, prior, 0.0, y), abs=1e-4)

    @pytest.mark.parametrize("t", [0.0, 0.2, 0.5])
    def test_degenerate_is_merton(self, params, degenerate_prior, t):
        decision = robust_feedback(params, degenerate_prior, t, degenerate_prior.y0, 0.0)
        assert decision.hedging == 0.0
        assert decision.pi == pytest.approx(merton_strategy(params, degenerate_prior, t), rel=1e-12)

    @pytest.mark.parametrize("t", [0.0, 0.25])
    def test_hedging_sign(self, params, prior, t):
        def hedging(y):
            return robust_feedback(params, prior, t, y, fy_quadrature(params, prior, t, y)).hedging

        assert hedging(params.r - 0.1) > 0
        assert hedging(params.r + 0.1) < 0
        assert hedging(params.r) == pytest.approx(0.0, abs=1e-12)


class TestSelector:
    def test_branches(self, params, prior):
        f_y = -1.5
        pivot = float(robust_position(params, prior, 0.0, 0.174, f_y))
        c = _band(params, prior, 0.0)
        assert worst_case_selector(params, prior, 0.0, 0.174, pivot + 1.0, f_y) == pytest.approx(0.174 - c)
        assert worst_case_selector(params, prior, 0.0, 0.174, pivot - 1.0, f_y) == pytest.approx(0.174 + c)

    def test_in_set_robust_position_is_charged_mean(self, params, prior):
        f_y = fy_quadrature(params, prior, 0.0, 0.174)
        pi = robust_position(params, prior, 0.0, 0.174, f_y)
        assert worst_case_selector(params, prior, 0.0, 0.174, pi, f_y) == 0.174

    def test_vectorized(self, params, prior):
        ys = np.array([0.1, 0.2])
        mu = worst_case_selector(params, prior, 0.1, ys, np.array([10.0, -10.0]), np.zeros(2))
        c = _band(params, prior, 0.1)
        assert mu == pytest.approx([0.1 - c, 0.2 + c])


class TestRegions:
    def test_three_regions(self, params, prior, fd_surface):
        regions = classify_regions(params, prior, 0.0, fd_surface)
        assert [region.label for region in regions] == [TradeRegion.Sell, TradeRegion.SmallTrade, TradeRegion.Buy]
        sell, small, buy = regions
        assert sell.lower == -math.inf and buy.upper == math.inf
        assert sell.upper == small.lower and small.upper == buy.lower
        assert small.interior_signs == ("+", "-")

    def test_bounds_straddle_band(self, params, prior, fd_surface):
        c = _band(params, prior, 0.0)
        _, small, _ = classify_regions(params, prior, 0.0, fd_surface)
        assert small.lower < params.r - c
        assert small.upper - (params.r + c) > 0
        assert small.interior_points[0] == pytest.approx(params.r, abs=1e-3)

    @pytest.mark.parametrize("y, sign", [(-0.1, 1.0), (-0.0507, 1.0), (0.0867, -1.0), (0.15, -1.0)])
    def test_sign_pattern_inside_band(self, params, prior, y, sign):
        assert np.sign(_quadrature_pi(params, prior, 0.0, y)) == sign

    def test_outer_crossings_match_quadrature(self, params, prior, fine_surface):
        c = _band(params, prior, 0.0)
        _, small, _ = classify_regions(params, prior, 0.0, fine_surface)

        def pi(y):
            return _quadrature_pi(params, prior, 0.0, y)

        y_low = brentq(pi, -1.0, params.r - c, xtol=1e-12)
        y_high = brentq(pi, params.r + c, 1.0, xtol=1e-12)
        assert small.lower == pytest.approx(y_low, abs=1e-6)
        assert small.upper == pytest.approx(y_high, abs=1e-6)

    def test_zero_width_two_regions(self, params_a0, prior, fd_surface_a0):
        regions = classify_regions(params_a0, prior, 0.0, fd_surface_a0)
        assert [region.label for region in regions] == [TradeRegion.Sell, TradeRegion.Buy]
        assert regions[0].upper == pytest.approx(params_a0.r, abs=1e-4)

    def test_horizon_rejected(self, params, prior, fd_surface):
        with pytest.raises(DomainError):
            classify_regions(params, prior, params.T, fd_surface)

    def test_narrow_grid_asks_for_wider(self, params, prior):
        grid = GridSpec(-0.1, 0.3, 41, 2)
        surface = tabulate_surface(params, prior, grid, times=[0.0, params.T])
        with pytest.raises(RegionNotFoundError, match="widen"):
            classify_regions(params, prior, 0.0, surface)


class TestValueFunction:
    def test_terminal_is_utility(self, params, prior):
        assert value_function(params, prior, params.T, 1.3, 0.0) == pytest.approx(
            -math.exp(-params.k * 1.3) / params.k, rel=1e-15)

    def test_negative_source_raises_value(self, params, prior):
        f = f_quadrature(params, prior, 0.0, 0.174)
        bare = -math.exp(-params.k * math.exp(params.r * params.T) * 1.0) / params.k
        assert value_function(params, prior, 0.0, 1.0, f) > bare

    def test_increasing_in_wealth(self, params, prior):
        values = [value_function(params, prior, 0.1, x, -0.01) for x in (0.0, 0.5, 1.0)]
        assert values[0] < values[1] < values[2] < 0

    def test_surface_value_matches_oracle(self, params, prior, fd_surface):
        expected = value_function(params, prior, 0.0, 1.0, f_quadrature(params, prior, 0.0, 0.174))
        assert robust_value_at(params, prior, fd_surface, 0.0, 1.0, 0.174) == pytest.approx(expected, rel=1e-4)

    def test_overflow(self, params, prior):
        with pytest.raises(NumericalFailure) as info:
            value_function(params, prior, 0.0, -1e6, 0.0)
        assert info.value.stage == "value_function"


class TestAdmissibility:
    def test_reference_witness(self, params, prior):
        witness = admissibility_lhs(params, prior, 1.1, 2.0, 1.0)
        assert witness.delta8 == pytest.approx(2.0)
        assert witness.lhs1 == pytest.approx(0.2996, abs=1e-3)
        assert witness.lhs2 == pytest.approx(0.0082, abs=1e-3)
        assert witness.lhs2_alt == pytest.approx(0.0100, abs=1e-3)
        assert witness.valid and witness.valid_alt

    def test_series_branch_matches_closed_form(self):
        x = np.array([0.0099999, 0.0100001])
        closed = x - 2.0 * np.log1p(x) + x / (1.0 + x)
        assert _learning_gap(x) == pytest.approx(closed, rel=1e-8)

    def test_learning_gap_small_argument(self):
        x = 1e-4
        assert float(_learning_gap(x)) == pytest.approx(x ** 3 / 3, rel=1e-3)

    def test_search_finds_witness(self, params, prior):
        result = check_admissibility(params, prior)
        assert result.found
        assert result.witness.valid
        assert result.evaluations <= 100_000
        assert max(result.witness.lhs1, result.witness.lhs2) <= 0.2996

    def test_long_horizon_fails(self, params, prior):
        result = check_admissibility(replace(params, T=50.0), prior)
        assert not result.found
        assert not result.witness.valid

    def test_degenerate_prior_trivial(self, params, degenerate_prior):
        witness = admissibility_lhs(params, degenerate_prior, 1.1, 2.0, 1.0)
        assert witness.lhs1 == 0.0 and witness.lhs2 == 0.0
        assert check_admissibility(params, degenerate_prior, 1000).found

    def test_budget_respected(self, params, prior):
        assert check_admissibility(params, prior, 1000).evaluations <= 1000

    @pytest.mark.parametrize("constants", [(1.0, 2.0, 1.0), (1.1, 1.0, 1.0), (1.1, 2.0, 0.0)])
    def test_invalid_constants(self, params, prior, constants):
        with pytest.raises(DomainError):
            admissibility_lhs(params, prior, *constants)

    def test_validity_is_both_inequalities(self, params, prior):
        rng = np.random.default_rng(17)
        for _ in range(50):
            witness = admissibility_lhs(params, replace(prior, sigma0_sq=rng.uniform(0.0, 0.2)),
                                        rng.uniform(1.01, 3.0), rng.uniform(1.01, 8.0), rng.uniform(0.05, 20.0))
            assert witness.valid == (witness.lhs1 < 1.0 and witness.lhs2 < 1.0)
