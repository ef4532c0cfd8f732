"""
模块名称：test_sir_analysis.py
主要功能：中断概率、截断误差界、η-μ/Hoyt特例、遍历速率与典型用户平均的测试
"""

import math

import numpy as np
import pytest
from scipy import stats

from app.analysis import sir_analysis
from app.analysis.fading import eta_mu_params, from_eta_mu, make_kappa_mu_profile, make_profile
from app.analysis.geometry import link_budget, place_user
from app.core.errors import InvalidParameter
from app.schemas.analysis import SirProblem
from tests.conftest import (
    random_problem,
    rayleigh_outage,
    rayleigh_problem,
    rayleigh_rate,
    table_problem,
)


class TestRayleighClosedForm:
    @pytest.mark.parametrize("T", [0.2, 1.5, 8.0])
    def test_series(self, T):
        result = sir_analysis.outage_series(rayleigh_problem(T=T))
        assert result.value == pytest.approx(rayleigh_outage(2.0, 0.5, T), abs=1e-10)
        assert result.method == "fd_series"
        assert result.error_bound == 0.0

    @pytest.mark.parametrize("T", [0.2, 1.5, 8.0])
    def test_ed_form(self, T):
        result = sir_analysis.outage_ed(rayleigh_problem(T=T))
        assert result.value == pytest.approx(rayleigh_outage(2.0, 0.5, T), abs=1e-10)
        assert result.method == "ed_form"

    def test_gil_pelaez(self):
        result = sir_analysis.outage_gil_pelaez(rayleigh_problem())
        assert result.value == pytest.approx(rayleigh_outage(2.0, 0.5, 1.5), abs=1e-7)

    def test_coverage_complements_outage(self):
        result = sir_analysis.outage_series(rayleigh_problem())
        assert sir_analysis.coverage(result) == pytest.approx(1.0 - result.value)


class TestSeriesAgainstEd:
    @pytest.mark.parametrize("seed", range(52))
    def test_random_configurations(self, cfg, seed):
        n = (1, 2, 6, 18)[seed % 4]
        problem = random_problem(np.random.default_rng(seed), n)
        series = sir_analysis.outage_series(problem, 200, cfg)
        ed = sir_analysis.outage_ed(problem, cfg)
        assert series.error_bound < 1e-10
        assert series.value == pytest.approx(ed.value, abs=1e-8)

    def test_table_scenario(self, table_row, cfg):
        series = sir_analysis.outage_series(table_row, 120, cfg)
        ed = sir_analysis.outage_ed(table_row, cfg)
        assert series.value == pytest.approx(ed.value, abs=1e-8)
        assert 0.0 < series.value < 1.0

    def test_gil_pelaez_agreement(self, cfg):
        problem = random_problem(np.random.default_rng(9), 3)
        series = sir_analysis.outage_series(problem, 150, cfg)
        assert sir_analysis.outage_gil_pelaez(problem).value == pytest.approx(series.value, abs=1e-6)

    def test_ed_rejects_kappa_mu_soi(self):
        problem = SirProblem(soi=make_kappa_mu_profile(1.0, 2.0, 1.0),
                             interferers=(make_profile(1.0, 1.0, 2.0, 0.2),), T=1.0)
        with pytest.raises(InvalidParameter):
            sir_analysis.outage_ed(problem)


class TestLimits:
    def test_tiny_threshold(self, table_row):
        assert sir_analysis.outage_series(table_row.with_threshold(1e-12)).value < 1e-9

    def test_extreme_thresholds_with_strong_line_of_sight(self, layout):
        soi = make_profile(2.5, 3.0, 5.0, 1.0)
        interferers = [make_profile(1.0, 1.2, 1.5, 1.0)] * 18
        problem = link_budget(place_user(layout, 700.0, 0.0, 3.4), soi, interferers, 1e-12)
        for P in (50, "auto"):
            assert sir_analysis.outage_series(problem, P).value < 1e-9
        assert sir_analysis.outage_series(problem.with_threshold(1e12)).value == pytest.approx(1.0, abs=1e-9)

    def test_huge_threshold(self, table_row):
        assert sir_analysis.outage_series(table_row.with_threshold(1e12)).value == pytest.approx(1.0, abs=1e-9)
        assert sir_analysis.outage_ed(table_row.with_threshold(1e12)).value == pytest.approx(1.0, abs=1e-9)

    def test_monotone_in_threshold(self):
        problem = random_problem(np.random.default_rng(5), 2)
        values = [sir_analysis.outage_series(problem.with_threshold(T)).value for T in (0.25, 0.5, 1.0, 2.0, 4.0)]
        assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("m", [1.0, 5.0, 50.0])
    def test_no_line_of_sight_ignores_shadowing(self, m):
        interferers = (make_profile(0.5, 1.5, 2.0, 0.3), make_profile(0.0, 2.0, 1.0, 0.1))
        base = SirProblem(soi=make_profile(0.0, 2.0, 1.0, 1.0), interferers=interferers, T=1.2)
        shadowed = SirProblem(soi=make_profile(0.0, 2.0, m, 1.0), interferers=interferers, T=1.2)
        assert sir_analysis.outage_series(shadowed).value == pytest.approx(
            sir_analysis.outage_series(base).value, abs=1e-10)

    def test_kappa_mu_soi_limit(self, cfg):
        interferers = (make_profile(1.0, 1.0, 3.0, 0.2), make_profile(0.5, 2.0, 1.5, 0.1))
        limit = SirProblem(soi=make_kappa_mu_profile(1.5, 1.2, 1.0), interferers=interferers, T=1.0)
        near = SirProblem(soi=make_profile(1.5, 1.2, 1e6, 1.0), interferers=interferers, T=1.0)
        result = sir_analysis.outage_soi_kappa_mu(limit, 80, cfg)
        assert result.method == "kappa_mu_soi"
        assert result.value == pytest.approx(sir_analysis.outage_series(near, 80, cfg).value, abs=1e-4)

    def test_kappa_mu_soi_type_check(self):
        with pytest.raises(InvalidParameter):
            sir_analysis.outage_soi_kappa_mu(rayleigh_problem())


def _strong_line_of_sight(interferer: tuple, n: int = 3) -> SirProblem:
    return SirProblem(soi=make_profile(2.5, 3.0, 5.0, 1.0),
                      interferers=(make_profile(*interferer),) * n, T=1.5)


class TestTruncation:
    def test_no_line_of_sight_bound_is_zero(self):
        problem = rayleigh_problem()
        assert sir_analysis.truncation_bound(problem, 0) == 0.0
        assert sir_analysis.required_terms(problem) == 0

    @pytest.mark.parametrize("P", [3, 8, 15, 30])
    def test_bound_covers_truncation_error(self, table_row, cfg, P):
        reference = sir_analysis.outage_series(table_row, 200, cfg).value
        result = sir_analysis.outage_series(table_row, P, cfg)
        assert abs(result.value - reference) <= result.error_bound

    @pytest.mark.parametrize("interferer", [(1.0, 1.2, 1.5, 0.1), (1.0, 2.0, 1.0, 0.1)])
    @pytest.mark.parametrize("P", [0, 2, 10, 25])
    def test_bound_covers_both_interferer_regimes(self, cfg, interferer, P):
        # 干扰μ_i < m_i 与 μ_i ≥ m_i
        problem = _strong_line_of_sight(interferer)
        reference = sir_analysis.outage_series(problem, 200, cfg).value
        result = sir_analysis.outage_series(problem, P, cfg)
        assert abs(result.value - reference) <= result.error_bound <= 1.0

    @pytest.mark.parametrize("P", [0, 5, 40])
    def test_bound_is_mixture_tail(self, P):
        problem = _strong_line_of_sight((1.0, 2.0, 1.0, 0.1))
        soi = problem.soi
        tail = stats.nbinom(soi.m, soi.theta / soi.lambda_).sf(P)
        assert sir_analysis.truncation_bound(problem, P) == pytest.approx(tail, rel=1e-9, abs=1e-13)

    def test_bound_never_exceeds_one(self):
        problem = SirProblem(soi=make_profile(50.0, 3.0, 200.0, 1.0),
                             interferers=(make_profile(1.0, 2.0, 1.0, 0.1),), T=1.0)
        assert 0.0 < sir_analysis.truncation_bound(problem, 0) <= 1.0

    def test_required_terms_grows_with_line_of_sight(self):
        interferers = (make_profile(1.0, 1.0, 10.0, 0.05),) * 3
        terms = [
            sir_analysis.required_terms(SirProblem(soi=make_profile(kappa, 1.5, 2.0, 1.0),
                                                   interferers=interferers, T=2.0))
            for kappa in (1.0, 2.0, 4.0)
        ]
        assert terms == sorted(terms)
        assert terms[0] < terms[-1]

    def test_required_terms_grows_with_clusters(self):
        interferers = (make_profile(1.0, 1.0, 10.0, 0.05),) * 3
        terms = [
            sir_analysis.required_terms(SirProblem(soi=make_profile(2.0, mu, 2.0, 1.0),
                                                   interferers=interferers, T=2.0))
            for mu in (1.0, 2.0, 3.0)
        ]
        assert terms == sorted(terms)

    def test_required_terms_meets_target(self):
        problem = _strong_line_of_sight((1.0, 1.2, 1.5, 0.1))
        P = sir_analysis.required_terms(problem, 1e-8)
        assert sir_analysis.truncation_bound(problem, P) < 1e-8
        assert sir_analysis.truncation_bound(problem, P - 1) >= 1e-8

    def test_auto_terms(self, table_row):
        result = sir_analysis.outage_series(table_row, "auto")
        assert result.terms_used == sir_analysis.required_terms(table_row)
        assert result.error_bound < 1e-6

    @pytest.mark.parametrize("P", ["many", -1, 2.5])
    def test_invalid_terms(self, table_row, P):
        with pytest.raises(InvalidParameter):
            sir_analysis.resolve_terms(table_row, P)

    def test_default_terms(self, table_row):
        assert sir_analysis.resolve_terms(table_row, None) == 50

    def test_negative_terms_rejected(self, table_row):
        with pytest.raises(InvalidParameter):
            sir_analysis.truncation_bound(table_row, -1)


class TestInterference:
    def test_single_interferer_is_its_cdf(self):
        from app.analysis.fading import cdf

        h = make_profile(1.2, 1.5, 3.0, 0.4)
        for y in (0.1, 0.5, 2.0):
            assert sir_analysis.interference_cdf([h], y) == pytest.approx(cdf(h, y), rel=1e-9)

    def test_bounds_and_monotonicity(self):
        interferers = [make_profile(1.0, 1.0, 10.0, 0.2)] * 4
        values = [sir_analysis.interference_cdf(interferers, y) for y in (0.0, 0.2, 0.8, 3.0)]
        assert values[0] == 0.0
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert 0.999 < values[-1] <= 1.0

    def test_slots_sorted(self):
        slots = sir_analysis.interferer_slots([make_profile(1.0, 2.0, 1.0, 3.0), make_profile(0.0, 1.0, 1.0, 0.1)])
        assert np.all(np.diff(slots.phi) >= 0.0)
        assert slots.total == pytest.approx(3.0)


class TestEtaMu:
    def test_routes_agree(self):
        soi = eta_mu_params(0.4, 1.5, 1.0)
        interferers = [eta_mu_params(0.7, 1.0, 0.15), eta_mu_params(0.3, 0.5, 0.1)]
        mapped = sir_analysis.outage_eta_mu(soi, interferers, 1.5, 120, cross_check=False)
        direct = sir_analysis.outage_eta_mu_direct(soi, interferers, 1.5)
        assert mapped.method == "eta_mu"
        assert mapped.value == pytest.approx(direct.value, abs=1e-7)

    @pytest.mark.parametrize("q", [0.3, 0.7, 1.0])
    def test_hoyt_matches_eta_mu(self, q):
        interferers = [eta_mu_params(0.5, 0.75, 0.2), eta_mu_params(1.0, 1.0, 0.1)]
        hoyt = sir_analysis.outage_hoyt(q, 1.0, interferers, 1.2)
        general = sir_analysis.outage_eta_mu(eta_mu_params(q * q, 0.5, 1.0), interferers, 1.2, 300)
        assert hoyt.method == "hoyt"
        assert hoyt.value == pytest.approx(general.value, abs=1e-7)

    def test_hoyt_rayleigh_case(self):
        # q = 1且干扰为η=1、μ̄=1/2时退化为Rayleigh/Rayleigh
        result = sir_analysis.outage_hoyt(1.0, 2.0, [eta_mu_params(1.0, 0.5, 0.5)], 1.5)
        assert result.value == pytest.approx(rayleigh_outage(2.0, 0.5, 1.5), abs=1e-10)

    def test_hoyt_parameter_range(self):
        with pytest.raises(InvalidParameter):
            sir_analysis.outage_hoyt(1.5, 1.0, [eta_mu_params(1.0, 0.5, 0.5)], 1.0)

    def test_symmetric_eta_is_gamma(self):
        p = eta_mu_params(1.0, 1.5, 1.0)
        assert from_eta_mu(p).kappa == 0.0


class TestRate:
    @pytest.mark.parametrize("soi_mean,interferer_mean", [(2.0, 0.5), (1.0, 0.9), (1.0, 3.0)])
    def test_rayleigh_closed_form(self, soi_mean, interferer_mean):
        problem = rayleigh_problem(soi_mean, interferer_mean)
        assert sir_analysis.rate_shadowed(problem) == pytest.approx(rayleigh_rate(soi_mean, interferer_mean),
                                                                    rel=1e-9)

    def test_multi_index_rayleigh(self):
        problem = rayleigh_problem()
        assert sir_analysis.rate_multi_index(problem, 0) == pytest.approx(rayleigh_rate(2.0, 0.5), rel=1e-8)

    def test_multi_index_shadowed(self):
        problem = SirProblem(soi=make_profile(1.0, 2.0, 3.0, 1.0),
                             interferers=(make_profile(0.5, 1.0, 2.0, 0.3),), T=1.0)
        assert sir_analysis.rate_multi_index(problem, 20) == pytest.approx(
            sir_analysis.rate_shadowed(problem, 20), rel=1e-7)

    def test_multi_index_two_interferers(self):
        problem = SirProblem(soi=make_profile(1.0, 2.0, 3.0, 1.0),
                             interferers=(make_profile(0.5, 1.0, 2.0, 0.3), make_profile(1.0, 1.5, 1.5, 0.2)), T=1.0)
        assert sir_analysis.rate_multi_index(problem, 6) == pytest.approx(
            sir_analysis.rate_shadowed(problem, 6), rel=1e-7)

    def test_matches_integration(self):
        problem = SirProblem(soi=make_profile(1.0, 2.0, 3.0, 1.0),
                             interferers=(make_profile(1.0, 1.2, 1.5, 0.2), make_profile(0.0, 1.0, 1.0, 0.1)),
                             T=1.0)
        assert sir_analysis.rate_shadowed(problem, 60) == pytest.approx(
            sir_analysis.rate_by_integration(problem, 60), rel=1e-5)

    def test_strong_interference(self):
        assert sir_analysis.rate_shadowed(rayleigh_problem(1.0, 1e7)) < 1e-5

    def test_kappa_mu_limit(self):
        interferers = (make_profile(1.0, 1.2, 1.5, 0.2),)
        limit = SirProblem(soi=make_kappa_mu_profile(2.0, 2.0, 1.0), interferers=interferers, T=1.0)
        near = SirProblem(soi=make_profile(2.0, 2.0, 1e6, 1.0), interferers=interferers, T=1.0)
        assert sir_analysis.rate_kappa_mu(limit, 60) == pytest.approx(sir_analysis.rate_shadowed(near, 60), rel=1e-4)
        assert sir_analysis.ergodic_rate(limit, 60) == sir_analysis.rate_kappa_mu(limit, 60)

    def test_requires_integer_mu(self, table_row):
        with pytest.raises(InvalidParameter):
            sir_analysis.rate_shadowed(table_row)

    def test_type_checks(self):
        with pytest.raises(InvalidParameter):
            sir_analysis.rate_kappa_mu(rayleigh_problem())


class TestTypicalUser:
    def test_constant_metric(self, layout):
        soi = make_profile(1.5, 1.2, 10.0, 1.0)
        interferers = [make_profile(1.0, 1.0, 10.0, 1.0)] * 18
        value = sir_analysis.typical_user(lambda r: 0.37, layout, soi, interferers, 1.0,
                                          np.linspace(0.0, 1000.0, 5), 3.6)
        assert value == pytest.approx(0.37, abs=1e-12)

    def test_area_weighting(self, layout):
        # E[r] = 2R/3
        value = sir_analysis.typical_user(lambda r: r, layout, None, [], 1.0, [0.0, 1000.0], 3.6)
        assert value == pytest.approx(2000.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("grid", [
        [0.0, 500.0], [0.0, 600.0, 400.0, 1000.0], [-1.0, 1000.0], [1000.0], [500.0, 1000.0], [0.0, 0.0, 1000.0],
    ])
    def test_invalid_grid(self, layout, grid):
        with pytest.raises(InvalidParameter):
            sir_analysis.typical_user(lambda r: 1.0, layout, None, [], 1.0, grid, 3.6)

    def test_unknown_metric(self, layout):
        with pytest.raises(InvalidParameter):
            sir_analysis.typical_user("capacity", layout, None, [], 1.0, [0.0, 1000.0], 3.6)

    def test_outage_monotone_in_threshold(self, layout):
        soi = make_profile(1.5, 1.2, 10.0, 1.0)
        interferers = [make_profile(1.0, 1.0, 10.0, 1.0)] * 18
        low, high = (
            sir_analysis.typical_user("outage", layout, soi, interferers, T, [0.0, 500.0, 1000.0], 3.6, P=30,
                                      order=4)
            for T in (1.0, 4.0)
        )
        assert 0.0 < low < high < 1.0


TABLE_ROWS = [(3.6, 600.0, 0.130, 0.134), (3.0, 800.0, 0.700, 0.713), (4.0, 500.0, 0.025, 0.029)]


class TestTableScenario:
    @pytest.mark.parametrize("alpha,r,low,high", TABLE_ROWS)
    def test_outage_over_azimuths(self, alpha, r, low, high):
        # 两层六边形（R为边心距）在0°–60°方位角上的取值范围
        values = [
            sir_analysis.outage_series(table_problem(alpha, r, az), 120).value
            for az in np.linspace(0.0, math.pi / 3.0, 7)
        ]
        assert low <= min(values) <= max(values) <= high

    def test_ed_agrees(self):
        problem = table_problem(3.0, 800.0)
        assert sir_analysis.outage_ed(problem).value == pytest.approx(
            sir_analysis.outage_series(problem, 120).value, abs=1e-8)
