"""
模块名称：reuse_planner.py
主要功能：部分频率复用（FFR）与软频率复用（SFR）的速率评估

说明：
    用户按复用1系统的SIR是否不低于门限S_t划分为中心用户与边缘用户。
    FFR：中心用户复用1（全部干扰），边缘用户复用1/3（仅同色小区干扰），边缘速率乘1/3。
    SFR：每个小区在本色频带上以β倍功率服务边缘用户，另两个频带服务中心用户；
    同一频带上以该频带为边缘频带的小区按β倍功率干扰。
"""

from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from app.analysis.fading import make_profile, sample_power
from app.analysis.geometry import cell_colors, link_budget, place_user
from app.analysis.montecarlo import run_batches, summarize
from app.analysis.sir_analysis import Terms, ergodic_rate, outage_series, typical_user
from app.core.errors import InvalidParameter
from app.core.logging import get_logger
from app.schemas.fading import FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout, UserLink
from app.schemas.reuse import ReuseConfig
from app.schemas.series import SeriesConfig
from app.schemas.simulation import McConfig, McEstimate

logger = get_logger(__name__)

Soi = Union[FadingProfile, KappaMuProfile]


def _check_interferers(layout: NetworkLayout, interferers: Sequence[FadingProfile]) -> np.ndarray:
    """校验干扰参数个数，返回各干扰基站颜色"""
    if len(interferers) != layout.n_interferers:
        raise InvalidParameter("reuse_planner", f"干扰参数{len(interferers)}个，布局中有{layout.n_interferers}个干扰基站")
    return cell_colors(layout)[1:]


def _boost(interferers: Sequence[FadingProfile], mask: np.ndarray, beta: float) -> List[FadingProfile]:
    return [h.scaled(beta) if boosted else h for h, boosted in zip(interferers, mask)]


def classify(link: UserLink, soi: Soi, interferers: Sequence[FadingProfile], S_t: float,
             P: Terms = None, cfg: SeriesConfig = None) -> Tuple[float, float]:
    """
    中心/边缘用户划分概率

    Args:
        link: 用户链路
        soi: 期望信号参数（发射端）
        interferers: 干扰参数（发射端）
        S_t: 划分门限（线性）
        P: 截断项数
        cfg: 级数配置

    Returns:
        Tuple[float, float]: (P_centre, P_edge)，两者之和为1
    """
    edge = outage_series(link_budget(link, soi, interferers, S_t), P, cfg).value
    return 1.0 - edge, edge


def reuse1_rate(layout: NetworkLayout, r: float, soi: Soi, interferers: Sequence[FadingProfile],
                alpha: float, azimuth: float = 0.0, P: Terms = None, cfg: SeriesConfig = None) -> float:
    """距离r处复用1系统的速率（全部干扰）"""
    _check_interferers(layout, interferers)
    link = place_user(layout, r, azimuth, alpha)
    return ergodic_rate(link_budget(link, soi, interferers), P, cfg)


def ffr_edge_rate(layout: NetworkLayout, r: float, soi: Soi, interferers: Sequence[FadingProfile],
                  alpha: float, azimuth: float = 0.0, P: Terms = None, cfg: SeriesConfig = None) -> float:
    """
    FFR边缘用户速率：只有与服务小区同色的小区在边缘频带上干扰（不含1/3带宽因子）

    Raises:
        InvalidParameter: 布局中没有同色小区（单层布局）
    """
    colors = _check_interferers(layout, interferers)
    co = colors == 0
    if not co.any():
        raise InvalidParameter("ffr_edge_rate", "布局中没有同色干扰小区")
    link = place_user(layout, r, azimuth, alpha)
    reduced = link.model_copy(update={"d": tuple(np.asarray(link.d)[co])})
    return ergodic_rate(link_budget(reduced, soi, [h for h, keep in zip(interferers, co) if keep]), P, cfg)


def sfr_edge_rate(layout: NetworkLayout, r: float, soi: Soi, interferers: Sequence[FadingProfile],
                  beta: float, alpha: float, azimuth: float = 0.0, P: Terms = None,
                  cfg: SeriesConfig = None) -> float:
    """SFR边缘用户速率：期望信号与同色干扰均为β倍功率"""
    colors = _check_interferers(layout, interferers)
    link = place_user(layout, r, azimuth, alpha)
    problem = link_budget(link, soi.scaled(beta), _boost(interferers, colors == 0, beta))
    return ergodic_rate(problem, P, cfg)


def sfr_centre_rate(layout: NetworkLayout, r: float, soi: Soi, interferers: Sequence[FadingProfile],
                    beta: float, alpha: float, azimuth: float = 0.0, P: Terms = None,
                    cfg: SeriesConfig = None) -> float:
    """
    SFR中心用户速率：在另外两个频带上取平均，
    频带k上颜色为k的干扰小区以β倍功率发射
    """
    colors = _check_interferers(layout, interferers)
    link = place_user(layout, r, azimuth, alpha)
    rates = [
        ergodic_rate(link_budget(link, soi, _boost(interferers, colors == band, beta)), P, cfg)
        for band in (1, 2)
    ]
    return 0.5 * (rates[0] + rates[1])


def ffr_rate(layout: NetworkLayout, soi: Soi, interferers: Sequence[FadingProfile], S_t: float,
             radial_grid: Sequence[float], alpha: float, azimuth: float = 0.0, P: Terms = None,
             cfg: SeriesConfig = None) -> float:
    """
    FFR平均速率：∫ [R_ce(r)·P(SIR ≥ S_t) + (1/3)·R_ed(r)·P(SIR < S_t)]·2r/R² dr

    Args:
        layout: 基站布局
        soi: 期望信号参数（发射端，μ为整数）
        interferers: 干扰参数（发射端）
        S_t: 划分门限（线性）
        radial_grid: 从0严格升序到R的径向网格
        alpha: 路径损耗指数
        azimuth: 用户方位角
        P: 截断项数
        cfg: 级数配置

    Returns:
        float: 速率（nats/s/Hz）
    """
    def metric(r: float) -> float:
        centre, edge = classify(place_user(layout, r, azimuth, alpha), soi, interferers, S_t, P, cfg)
        return (centre * reuse1_rate(layout, r, soi, interferers, alpha, azimuth, P, cfg)
                + edge * ffr_edge_rate(layout, r, soi, interferers, alpha, azimuth, P, cfg) / 3.0)

    return typical_user(metric, layout, soi, interferers, S_t, radial_grid, alpha, azimuth, P, cfg)


def sfr_rate(layout: NetworkLayout, soi: Soi, interferers: Sequence[FadingProfile], S_t: float, beta: float,
             radial_grid: Sequence[float], alpha: float, azimuth: float = 0.0, P: Terms = None,
             cfg: SeriesConfig = None) -> float:
    """SFR平均速率：∫ [R_ce(r)·P(SIR ≥ S_t) + R_ed(r)·P(SIR < S_t)]·2r/R² dr"""
    def metric(r: float) -> float:
        centre, edge = classify(place_user(layout, r, azimuth, alpha), soi, interferers, S_t, P, cfg)
        return (centre * sfr_centre_rate(layout, r, soi, interferers, beta, alpha, azimuth, P, cfg)
                + edge * sfr_edge_rate(layout, r, soi, interferers, beta, alpha, azimuth, P, cfg))

    return typical_user(metric, layout, soi, interferers, S_t, radial_grid, alpha, azimuth, P, cfg)


def simulate_reuse(config: ReuseConfig, layout: NetworkLayout, soi: Soi, interferers: Sequence[FadingProfile],
                   alpha: float, mc: McConfig) -> McEstimate:
    """
    按负载的复用仿真：每批撒batch_size个面积均匀分布的用户

    每个用户先在全部PRB上按复用1计算SIR，不低于S_t的PRB数达到判定数即为中心用户；
    随后在分到的PRB上按方案重新抽取衰落并平均 ln(1+SIR)。FFR边缘用户速率乘1/3。

    Args:
        config: 复用配置
        layout: 基站布局
        soi: 期望信号参数（发射端）
        interferers: 干扰参数（发射端）
        alpha: 路径损耗指数
        mc: 仿真配置

    Returns:
        McEstimate: 每用户平均速率的估计
    """
    colors = _check_interferers(layout, interferers)
    sites = layout.positions[1:]
    beta = config.beta if config.scheme == "SFR" else 1.0
    n_prb = config.prbs
    n_own = config.prbs_per_user

    def received(rng, size: int, count: int, d: np.ndarray, r: np.ndarray, gains: np.ndarray, soi_gain: float):
        g = sample_power(soi, rng, (size, count)) * (soi_gain * r ** -alpha)[:, None]
        total = np.zeros((size, count))
        for k, h in enumerate(interferers):
            if gains[k] > 0.0:
                total += sample_power(h, rng, (size, count)) * (gains[k] * d[:, k] ** -alpha)[:, None]
        return g / total

    def statistic(rng, size: int) -> float:
        r = layout.R * np.sqrt(rng.uniform(0.0, 1.0, size))
        phi = rng.uniform(0.0, 2.0 * np.pi, size)
        d = np.hypot(r[:, None] * np.cos(phi)[:, None] - sites[None, :, 0],
                     r[:, None] * np.sin(phi)[:, None] - sites[None, :, 1])
        ones = np.ones(len(interferers))
        sir = received(rng, size, n_prb, d, r, ones, 1.0)
        centre = np.count_nonzero(sir >= config.S_t, axis=1) >= config.classification_prb_count
        if config.scheme == "FFR":
            centre_rate = np.log1p(received(rng, size, n_own, d, r, ones, 1.0)).mean(axis=1)
            edge_sir = received(rng, size, n_own, d, r, (colors == 0).astype(float), 1.0)
            edge_rate = np.log1p(edge_sir).mean(axis=1) / 3.0
        else:
            band = rng.integers(1, 3, size)
            centre_rate = np.empty(size)
            for k in (1, 2):
                gains = np.where(colors == k, beta, 1.0)
                rates = np.log1p(received(rng, size, n_own, d, r, gains, 1.0)).mean(axis=1)
                centre_rate = np.where(band == k, rates, centre_rate)
            edge_sir = received(rng, size, n_own, d, r, np.where(colors == 0, beta, 1.0), beta)
            edge_rate = np.log1p(edge_sir).mean(axis=1)
        return float(np.mean(np.where(centre, centre_rate, edge_rate)))

    estimate = summarize(run_batches(statistic, mc), mc.confidence)
    logger.info("reuse_simulated", scheme=config.scheme, mean=estimate.mean, batches=estimate.batches)
    return estimate


def sweep_m(config: ReuseConfig, layout: NetworkLayout, soi: FadingProfile, interferer: FadingProfile,
            m_values: Sequence[float], radial_grid: Sequence[float], alpha: float, azimuth: float = 0.0,
            P: Terms = None, cfg: SeriesConfig = None) -> pd.DataFrame:
    """
    期望信号阴影参数m的扫描，所有干扰取同一参数

    Returns:
        pd.DataFrame: 列 m, ffr_rate, sfr_rate
    """
    interferers = [interferer] * layout.n_interferers
    rows = []
    for m in m_values:
        swept = make_profile(soi.kappa, soi.mu, m, soi.mean_power)
        ffr = ffr_rate(layout, swept, interferers, config.S_t, radial_grid, alpha, azimuth, P, cfg)
        sfr = sfr_rate(layout, swept, interferers, config.S_t, config.beta, radial_grid, alpha, azimuth, P, cfg)
        logger.info("sweep_point", m=m, ffr=ffr, sfr=sfr)
        rows.append({"m": float(m), "ffr_rate": ffr, "sfr_rate": sfr})
    return pd.DataFrame(rows, columns=["m", "ffr_rate", "sfr_rate"])
