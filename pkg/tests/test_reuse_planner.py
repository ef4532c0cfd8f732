"""
模块名称：test_reuse_planner.py
主要功能：中心/边缘用户划分、FFR与SFR速率及按负载仿真的测试
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.analysis import reuse_planner
from app.analysis.fading import make_profile
from app.analysis.geometry import build_two_tier_hex, place_user
from app.analysis.sir_analysis import typical_user
from app.core.errors import InvalidParameter
from app.schemas.reuse import ReuseConfig
from app.schemas.simulation import McConfig

ALPHA = 3.4
S_T = 10.0 ** 0.3
GRID = [0.0, 500.0, 1000.0]


@pytest.fixture(scope="module")
def soi():
    return make_profile(2.5, 3.0, 5.0, 1.0)


@pytest.fixture(scope="module")
def interferers():
    return [make_profile(1.0, 1.2, 1.5, 1.0)] * 18


class TestClassify:
    def test_probabilities_sum_to_one(self, layout, soi, interferers):
        link = place_user(layout, 700.0, 0.0, ALPHA)
        centre, edge = reuse_planner.classify(link, soi, interferers, S_T)
        assert centre + edge == pytest.approx(1.0)
        assert 0.0 < edge < 1.0

    def test_extreme_thresholds(self, layout, soi, interferers):
        link = place_user(layout, 700.0, 0.0, ALPHA)
        assert reuse_planner.classify(link, soi, interferers, 1e-12)[0] == pytest.approx(1.0, abs=1e-9)
        assert reuse_planner.classify(link, soi, interferers, 1e12)[1] == pytest.approx(1.0, abs=1e-9)

    def test_table_scenario(self, layout):
        link = place_user(layout, 600.0, 0.0, 3.6)
        centre, edge = reuse_planner.classify(link, make_profile(1.5, 1.2, 10.0, 1.0),
                                              [make_profile(1.0, 1.0, 10.0, 1.0)] * 18, S_T)
        assert centre + edge == pytest.approx(1.0)


class TestPerRadiusRates:
    def test_edge_band_has_fewer_interferers(self, layout, soi, interferers):
        edge = reuse_planner.ffr_edge_rate(layout, 1000.0, soi, interferers, ALPHA, P=40)
        reuse1 = reuse_planner.reuse1_rate(layout, 1000.0, soi, interferers, ALPHA, P=40)
        assert edge > reuse1

    def test_unit_power_factor_is_reuse1(self, layout, soi, interferers):
        reuse1 = reuse_planner.reuse1_rate(layout, 800.0, soi, interferers, ALPHA, P=40)
        centre = reuse_planner.sfr_centre_rate(layout, 800.0, soi, interferers, 1.0, ALPHA, P=40)
        edge = reuse_planner.sfr_edge_rate(layout, 800.0, soi, interferers, 1.0, ALPHA, P=40)
        assert centre == pytest.approx(reuse1, rel=1e-12)
        assert edge == pytest.approx(reuse1, rel=1e-12)

    def test_boosted_edge_bands_hurt_centre_users(self, layout, soi, interferers):
        reuse1 = reuse_planner.reuse1_rate(layout, 800.0, soi, interferers, ALPHA, P=40)
        centre = reuse_planner.sfr_centre_rate(layout, 800.0, soi, interferers, 2.0, ALPHA, P=40)
        assert centre < reuse1

    def test_single_tier_has_no_co_colour_cells(self, soi):
        layout = build_two_tier_hex(1000.0, tiers=1)
        interferers = [make_profile(1.0, 1.2, 1.5, 1.0)] * 6
        with pytest.raises(InvalidParameter):
            reuse_planner.ffr_edge_rate(layout, 500.0, soi, interferers, ALPHA)

    def test_interferer_count_checked(self, layout, soi, interferers):
        with pytest.raises(InvalidParameter):
            reuse_planner.reuse1_rate(layout, 500.0, soi, interferers[:10], ALPHA)


class TestAverageRates:
    def test_ffr_decreases_with_interference(self, layout, soi, interferers):
        base = reuse_planner.ffr_rate(layout, soi, interferers, S_T, GRID, ALPHA, P=30)
        louder = reuse_planner.ffr_rate(layout, soi, [h.scaled(2.0) for h in interferers], S_T, GRID, ALPHA, P=30)
        assert 0.0 < louder < base

    def test_sfr_degenerates_to_reuse1(self, layout, soi, interferers):
        # β=1且门限趋于0时所有用户都是中心用户
        sfr = reuse_planner.sfr_rate(layout, soi, interferers, 1e-12, 1.0, GRID, ALPHA, P=30)
        expected = typical_user("rate", layout, soi, interferers, 1.0, GRID, ALPHA, P=30)
        assert sfr == pytest.approx(expected, rel=1e-9)

    def test_sweep_columns(self, layout, soi, interferers):
        config = ReuseConfig(scheme="FFR", S_t=S_T, beta=2.0)
        frame = reuse_planner.sweep_m(config, layout, soi, interferers[0], [1.0, 4.0], [0.0, 1000.0], ALPHA,
                                      P=20)
        assert list(frame.columns) == ["m", "ffr_rate", "sfr_rate"]
        assert frame["m"].tolist() == [1.0, 4.0]
        assert (frame[["ffr_rate", "sfr_rate"]] > 0.0).all().all()

    @pytest.mark.slow
    def test_ffr_increases_with_shadowing_parameter(self, layout, soi, interferers):
        config = ReuseConfig(scheme="FFR", S_t=S_T, beta=2.0)
        frame = reuse_planner.sweep_m(config, layout, soi, interferers[0], [1.0, 5.0, 20.0],
                                      np.linspace(0.0, 1000.0, 5), ALPHA, P=60)
        assert frame["ffr_rate"].is_monotonic_increasing

    @pytest.mark.slow
    def test_ffr_above_sfr(self, layout, soi, interferers):
        config = ReuseConfig(scheme="FFR", S_t=S_T, beta=2.0)
        frame = reuse_planner.sweep_m(config, layout, soi, interferers[0], [1.0, 10.0, 20.0],
                                      np.linspace(0.0, 1000.0, 5), ALPHA, P=60)
        assert (frame["ffr_rate"] > frame["sfr_rate"]).all()


class TestSimulation:
    def test_config_sharing_rule(self):
        with pytest.raises(ValidationError):
            ReuseConfig(S_t=1.0, prbs=10, users_per_cell=25)
        with pytest.raises(ValidationError):
            ReuseConfig(S_t=1.0, beta=0.5)
        assert ReuseConfig(S_t=1.0).prbs_per_user == 2

    @pytest.mark.parametrize("scheme", ["FFR", "SFR"])
    def test_runs_and_is_reproducible(self, layout, soi, interferers, scheme):
        config = ReuseConfig(scheme=scheme, S_t=S_T, beta=2.0)
        mc = McConfig(iterations=4, batch_size=20, seed=3, threads=2)
        first = reuse_planner.simulate_reuse(config, layout, soi, interferers, ALPHA, mc)
        second = reuse_planner.simulate_reuse(config, layout, soi, interferers, ALPHA, mc.model_copy(update={"threads": 1}))
        assert first == second
        assert first.mean > 0.0

    def test_degenerate_sfr_matches_ffr(self, layout, soi, interferers):
        # 门限趋于0时两种方案都退化为复用1
        mc = McConfig(iterations=40, batch_size=25, seed=5, confidence=0.99)
        ffr = reuse_planner.simulate_reuse(ReuseConfig(scheme="FFR", S_t=1e-12), layout, soi, interferers, ALPHA, mc)
        sfr = reuse_planner.simulate_reuse(ReuseConfig(scheme="SFR", S_t=1e-12, beta=1.0), layout, soi,
                                           interferers, ALPHA, mc)
        assert abs(ffr.mean - sfr.mean) <= 2.0 * (ffr.half_width + sfr.half_width)

    @pytest.mark.slow
    def test_analytic_ffr_within_simulation(self, layout, soi, interferers):
        config = ReuseConfig(scheme="FFR", S_t=S_T)
        analytic = reuse_planner.ffr_rate(layout, soi, interferers, S_T, np.linspace(0.0, 1000.0, 9), ALPHA, P=60)
        estimate = reuse_planner.simulate_reuse(config, layout, soi, interferers, ALPHA,
                                                McConfig(iterations=400, batch_size=25, seed=1, confidence=0.99))
        assert abs(estimate.mean - analytic) <= 0.05 * analytic
