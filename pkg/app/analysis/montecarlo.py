"""
模块名称：montecarlo.py
主要功能：SIR仿真校验器

说明：
    每批样本使用独立的Philox计数器子流，密钥由 (seed, 批下标) 决定，
    因此结果与工作线程数无关；批均值按批下标顺序归并，置信区间采用批均值法。
"""

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
import pandas as pd
from numpy.random import Generator, Philox
from scipy import stats

from app.analysis.fading import cdf, sample_power
from app.core.config import settings
from app.core.errors import InvalidParameter
from app.core.logging import get_logger
from app.schemas.analysis import SirProblem
from app.schemas.fading import FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout
from app.schemas.simulation import McConfig, McEstimate

logger = get_logger(__name__)

# 批统计量：输入生成器与批大小，返回该批的样本均值
BatchStatistic = Callable[[Generator, int], float]

KS_MIN_SAMPLES = 10_000


def batch_generator(seed: int, batch: int) -> Generator:
    """第batch批的随机数生成器，Philox密钥为 (batch << 64) | seed"""
    return Generator(Philox(key=(batch << 64) | seed))


def _sir_samples(p: SirProblem, rng: Generator, size: int) -> np.ndarray:
    g = sample_power(p.soi, rng, size)
    interference = np.zeros(size)
    for h in p.interferers:
        interference += sample_power(h, rng, size)
    return g / interference


def outage_statistic(p: SirProblem) -> BatchStatistic:
    """批内 SIR < T 的比例"""
    return lambda rng, size: float(np.mean(_sir_samples(p, rng, size) < p.T))


def rate_statistic(p: SirProblem) -> BatchStatistic:
    """批内 ln(1+SIR) 的均值"""
    return lambda rng, size: float(np.mean(np.log1p(_sir_samples(p, rng, size))))


def run_batches(statistic: BatchStatistic, mc: McConfig) -> np.ndarray:
    """
    执行全部批次并返回按批下标排列的批均值

    批次按连续区段分给工作线程，各批只依赖自身的子流。

    Args:
        statistic: 批统计量
        mc: 仿真配置

    Returns:
        np.ndarray: 批均值，长度为mc.iterations
    """
    threads = max(1, mc.threads)
    edges = np.linspace(0, mc.iterations, min(threads, mc.iterations) + 1).astype(int)

    def work(lo: int, hi: int) -> np.ndarray:
        means = np.array([statistic(batch_generator(mc.seed, b), mc.batch_size) for b in range(lo, hi)])
        logger.debug("mc_chunk_done", first=lo, last=hi - 1)
        return means

    if threads == 1:
        return work(0, mc.iterations)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, edges[:-1], edges[1:]))
    return np.concatenate(parts)


def summarize(batch_means: np.ndarray, confidence: float) -> McEstimate:
    """
    批均值法置信区间：均值 ± z·s/√批数，s为批均值的样本标准差

    Args:
        batch_means: 批均值
        confidence: 置信水平

    Returns:
        McEstimate: 估计值与置信区间
    """
    n = batch_means.size
    if n < 2:
        raise InvalidParameter("summarize", "至少需要两个批次")
    mean = float(np.mean(batch_means))
    half = float(stats.norm.ppf(0.5 + 0.5 * confidence)) * float(np.std(batch_means, ddof=1)) / math.sqrt(n)
    return McEstimate(mean=mean, ci_lo=mean - half, ci_hi=mean + half, batches=n)


def simulate_outage(p: SirProblem, mc: McConfig) -> McEstimate:
    """
    中断概率仿真：每次试验抽取g与全部h_i，统计 g/Σh_i < T

    Args:
        p: SIR问题
        mc: 仿真配置

    Returns:
        McEstimate: 估计值与置信区间
    """
    estimate = summarize(run_batches(outage_statistic(p), mc), mc.confidence)
    logger.info("mc_outage", T=p.T, N=p.n, batches=mc.iterations, mean=estimate.mean)
    return estimate


def simulate_rate(p: SirProblem, mc: McConfig) -> McEstimate:
    """遍历速率仿真，统计量为 ln(1+SIR)"""
    estimate = summarize(run_batches(rate_statistic(p), mc), mc.confidence)
    logger.info("mc_rate", N=p.n, batches=mc.iterations, mean=estimate.mean)
    return estimate


def simulate_typical_user(metric: str, layout: NetworkLayout, soi: Union[FadingProfile, KappaMuProfile],
                          interferers: Sequence[FadingProfile], T: float, alpha: float,
                          mc: McConfig) -> McEstimate:
    """
    按面积均匀撒点的典型用户仿真：r = R√u，方位角均匀

    Args:
        metric: "outage" 或 "rate"
        layout: 基站布局
        soi: 期望信号参数（发射端平均功率）
        interferers: 干扰参数（发射端平均功率），与layout的干扰基站一一对应
        T: 目标SIR（线性）
        alpha: 路径损耗指数
        mc: 仿真配置

    Returns:
        McEstimate: 估计值与置信区间
    """
    if metric not in ("outage", "rate"):
        raise InvalidParameter("simulate_typical_user", f"未知指标{metric!r}")
    if len(interferers) != layout.n_interferers:
        raise InvalidParameter("simulate_typical_user", "干扰参数个数与布局不一致")
    sites = layout.positions[1:]

    def statistic(rng: Generator, size: int) -> float:
        r = layout.R * np.sqrt(rng.uniform(0.0, 1.0, size))
        phi = rng.uniform(0.0, 2.0 * math.pi, size)
        user = np.stack((r * np.cos(phi), r * np.sin(phi)), axis=1)
        d = np.hypot(user[:, None, 0] - sites[None, :, 0], user[:, None, 1] - sites[None, :, 1])
        g = sample_power(soi, rng, size) * r ** -alpha
        interference = np.zeros(size)
        for k, h in enumerate(interferers):
            interference += sample_power(h, rng, size) * d[:, k] ** -alpha
        sir = g / interference
        return float(np.mean(sir < T)) if metric == "outage" else float(np.mean(np.log1p(sir)))

    return summarize(run_batches(statistic, mc), mc.confidence)


def simulate_interference(interferers: Sequence[FadingProfile], n: int, seed: int = 0) -> np.ndarray:
    """
    抽取总干扰 I = Σh_i 的n个样本

    Args:
        interferers: 干扰参数
        n: 样本数
        seed: 随机种子

    Returns:
        np.ndarray: 样本
    """
    rng = Generator(Philox(seed))
    total = np.zeros(n)
    for h in interferers:
        total += sample_power(h, rng, n)
    return total


def ks_validate_sampler(profile: Union[FadingProfile, KappaMuProfile], n: int, seed: int = 0) -> float:
    """
    抽样器与解析分布函数（Φ2形式）之间的Kolmogorov–Smirnov统计量

    Args:
        profile: 衰落参数
        n: 样本数，不少于KS_MIN_SAMPLES
        seed: 随机种子

    Returns:
        float: KS统计量

    Raises:
        InvalidParameter: 样本数不足
    """
    if n < KS_MIN_SAMPLES:
        raise InvalidParameter("ks_validate_sampler", f"样本数{n}少于{KS_MIN_SAMPLES}")
    samples = sample_power(profile, Generator(Philox(seed)), n)
    result = stats.kstest(samples, lambda x: np.array([cdf(profile, float(v)) for v in np.atleast_1d(x)]))
    logger.debug("ks_validate", n=n, statistic=float(result.statistic))
    return float(result.statistic)


def write_batches_csv(batch_means: np.ndarray, path: Union[str, Path]) -> Path:
    """导出批均值CSV（batch_index, batch_mean）"""
    path = Path(path)
    frame = pd.DataFrame({"batch_index": np.arange(len(batch_means)), "batch_mean": batch_means})
    frame.to_csv(path, index=False, float_format="%.12g")
    return path


def default_config(iterations: int, seed: int = 0, confidence: Optional[float] = None) -> McConfig:
    """按全局配置构造仿真参数"""
    return McConfig(
        iterations=iterations,
        batch_size=settings.MC_BATCH_SIZE,
        seed=seed,
        confidence=settings.MC_CONFIDENCE if confidence is None else confidence,
        threads=settings.WORKER_THREADS,
    )
