"""
模块名称：conftest.py
主要功能：测试共享夹具（级数配置、典型SIR问题、随机参数生成）
"""

import math

import numpy as np
import pytest

from app.analysis.fading import make_profile
from app.analysis.geometry import build_two_tier_hex, link_budget, place_user
from app.schemas.analysis import SirProblem
from app.schemas.series import SeriesConfig

# 表格场景：R = 1000 m，T = 3 dB，κ=1.5，μ=1.2，m=10；干扰 κ_i=1，μ_i=1，m_i=10
TABLE_T = 10.0 ** 0.3


@pytest.fixture
def cfg() -> SeriesConfig:
    return SeriesConfig.from_settings()


@pytest.fixture(scope="session")
def layout():
    return build_two_tier_hex(1000.0)


def table_problem(alpha: float, r: float, azimuth: float = 0.0, T: float = TABLE_T) -> SirProblem:
    """表格场景在给定路径损耗指数、距离与方位角下的SIR问题"""
    hexagon = build_two_tier_hex(1000.0)
    soi = make_profile(1.5, 1.2, 10.0, 1.0)
    interferers = [make_profile(1.0, 1.0, 10.0, 1.0)] * hexagon.n_interferers
    return link_budget(place_user(hexagon, r, azimuth, alpha), soi, interferers, T)


@pytest.fixture(scope="session")
def table_row() -> SirProblem:
    return table_problem(3.6, 600.0)


def rayleigh_problem(soi_mean: float = 2.0, interferer_mean: float = 0.5, T: float = 1.5) -> SirProblem:
    """单干扰Rayleigh/Rayleigh问题，中断概率为 Tγ̄₁/(γ̄+Tγ̄₁)"""
    return SirProblem(
        soi=make_profile(0.0, 1.0, 1.0, soi_mean),
        interferers=(make_profile(0.0, 1.0, 1.0, interferer_mean),),
        T=T,
    )


def rayleigh_outage(soi_mean: float, interferer_mean: float, T: float) -> float:
    return T * interferer_mean / (soi_mean + T * interferer_mean)


def rayleigh_rate(soi_mean: float, interferer_mean: float) -> float:
    a = interferer_mean / soi_mean
    return -math.log(a) / (1.0 - a)


def random_problem(rng: np.random.Generator, n: int) -> SirProblem:
    """收敛域内的随机SIR问题"""
    soi = make_profile(rng.uniform(0.0, 2.0), rng.uniform(0.5, 2.5), rng.uniform(1.0, 10.0), rng.uniform(0.5, 2.0))
    interferers = tuple(
        make_profile(rng.uniform(0.0, 2.0), rng.uniform(0.5, 2.0), rng.uniform(1.0, 10.0), rng.uniform(0.05, 0.5))
        for _ in range(n)
    )
    return SirProblem(soi=soi, interferers=interferers, T=rng.uniform(0.3, 3.0))
