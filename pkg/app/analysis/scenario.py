"""
模块名称：scenario.py
主要功能：把运行配置块转换为布局、衰落参数与SIR问题（dB与线性值的换算只在这里进行）
"""

from typing import List, Optional, Sequence, Union

import numpy as np

from app.analysis.fading import make_kappa_mu_profile, make_profile
from app.analysis.geometry import build_two_tier_hex, link_budget, place_user
from app.analysis.sir_analysis import required_terms
from app.core.config import settings
from app.core.errors import DimensionMismatch
from app.core.logging import get_logger
from app.schemas.analysis import SirProblem
from app.schemas.fading import FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout
from app.schemas.run import GeometryBlock, InterfererBlock, McBlock, ScenarioBlock, SeriesBlock, SoiBlock
from app.schemas.simulation import McConfig

logger = get_logger(__name__)

# 每层干扰基站数
TIER_SIZES = (6, 12)


def db_to_linear(value_db: float) -> float:
    """dB转线性值"""
    return 10.0 ** (value_db / 10.0)


def build_layout(g: GeometryBlock) -> NetworkLayout:
    return build_two_tier_hex(g.R_m, g.radius_convention, g.tiers)


def build_soi(s: SoiBlock) -> Union[FadingProfile, KappaMuProfile]:
    """m为"inf"时构造κ-μ参数"""
    if s.m == "inf":
        return make_kappa_mu_profile(s.kappa, s.mu, s.mean)
    return make_profile(s.kappa, s.mu, s.m, s.mean)


def build_interferers(blocks: Sequence[InterfererBlock], layout: NetworkLayout) -> List[FadingProfile]:
    """
    展开干扰参数：1个块用于全部基站，每层1个块按层分配，或每个基站1个块

    Args:
        blocks: 干扰参数块
        layout: 基站布局

    Returns:
        List[FadingProfile]: 与布局干扰基站一一对应的参数

    Raises:
        DimensionMismatch: 块数无法对应到基站
    """
    n = layout.n_interferers
    if len(blocks) == 1:
        expanded = list(blocks) * n
    elif len(blocks) == n:
        expanded = list(blocks)
    elif len(blocks) == layout.tiers:
        expanded = [b for b, size in zip(blocks, TIER_SIZES) for _ in range(size)]
    else:
        raise DimensionMismatch("build_interferers", f"{len(blocks)}个干扰块无法对应{n}个干扰基站")

    profiles = []
    for b in expanded:
        m = b.m
        if m > settings.INTERFERER_M_CAP:
            logger.warning("interferer_m_capped", m=m, cap=settings.INTERFERER_M_CAP)
            m = settings.INTERFERER_M_CAP
        profiles.append(make_profile(b.kappa, b.mu, m, b.mean))
    return profiles


def build_problem(scenario: ScenarioBlock, T: Optional[float] = None) -> SirProblem:
    """
    构造路径损耗后的SIR问题

    Args:
        scenario: 场景配置
        T: 目标SIR（线性），缺省取T_dB换算值

    Returns:
        SirProblem: SIR问题
    """
    g = scenario.geometry
    layout = build_layout(g)
    link = place_user(layout, g.r_m, g.azimuth_rad, g.alpha)
    T = db_to_linear(scenario.T_dB) if T is None else T
    return link_budget(link, build_soi(scenario.soi), build_interferers(scenario.interferers, layout), T)


def resolve_series(problem: SirProblem, series: SeriesBlock) -> int:
    """把级数块中的P（整数或"auto"）解析为截断项数"""
    if series.P == "auto":
        return required_terms(problem, series.epsilon)
    return int(series.P)


def radial_grid(g: GeometryBlock) -> np.ndarray:
    """典型用户积分的等距径向网格"""
    return np.linspace(0.0, g.R_m, g.radial_intervals + 1)


def build_mc(block: McBlock, threads: int = None, seed: int = None) -> McConfig:
    """仿真配置，threads与seed可由命令行覆盖"""
    return McConfig(
        iterations=block.batches,
        batch_size=block.batch_size,
        seed=block.seed if seed is None else seed,
        confidence=block.confidence,
        threads=settings.WORKER_THREADS if threads is None else threads,
    )
