"""
模块名称：fading.py
主要功能：κ-μ阴影、κ-μ、η-μ、Hoyt及Rician阴影衰落的参数化、概率密度与分布函数计算，
         以及蒙特卡洛仿真使用的信道功率采样

说明：
    κ-μ阴影功率可写成负二项混合的Gamma律：混合指标K ~ NegBin(m, θ/λ)，
    条件分布为Gamma(μ+K, θ)。分布函数与采样都基于这一结构。
"""

import math
import warnings
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy import special, stats

from app.analysis.hypergeom import log_kummer_1f1, log_phi2_n
from app.core.config import settings
from app.core.errors import InvalidParameter, LargeMWarning
from app.core.logging import get_logger
from app.schemas.fading import EtaMuParams, FadingProfile, KappaMuProfile
from app.schemas.series import SeriesConfig

logger = get_logger(__name__)

Profile = Union[FadingProfile, KappaMuProfile]

_MIXTURE_TAIL = 1e-16


def _validation_detail(exc: ValidationError) -> str:
    """把pydantic校验错误压缩成一行"""
    return "; ".join(f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors())


def make_profile(kappa: float, mu: float, m: float, mean_power: float, origin: str = "native") -> FadingProfile:
    """
    创建κ-μ阴影衰落参数

    Args:
        kappa: 功率比κ ≥ 0
        mu: 簇数μ > 0
        m: 阴影参数m > 0（有限）
        mean_power: 平均功率γ̄ > 0
        origin: 参数来源标记

    Returns:
        FadingProfile: 含派生尺度θ、λ的参数

    Raises:
        InvalidParameter: 参数越界
    """
    try:
        profile = FadingProfile(kappa=kappa, mu=mu, m=m, mean_power=mean_power, origin=origin)
    except ValidationError as exc:
        raise InvalidParameter("make_profile", _validation_detail(exc)) from exc
    if m > settings.LARGE_M_WARNING:
        warnings.warn(f"m={m:g} 过大，建议改用κ-μ极限形式", LargeMWarning, stacklevel=2)
        logger.warning("large_m", m=m, threshold=settings.LARGE_M_WARNING)
    return profile


def make_kappa_mu_profile(kappa: float, mu: float, mean_power: float) -> KappaMuProfile:
    """
    创建κ-μ（m→∞）衰落参数

    Raises:
        InvalidParameter: 参数越界
    """
    try:
        return KappaMuProfile(kappa=kappa, mu=mu, mean_power=mean_power)
    except ValidationError as exc:
        raise InvalidParameter("make_kappa_mu_profile", _validation_detail(exc)) from exc


def from_eta_mu(p: EtaMuParams) -> FadingProfile:
    """
    η-μ（格式一）映射为κ-μ阴影：μ = 2μ̄，κ = (1−η)/(2η)，m = μ̄

    η > 1 时先按对称性折叠为1/η，来源标记为 from_eta_mu_folded。

    Args:
        p: η-μ参数

    Returns:
        FadingProfile: 映射后的参数
    """
    eta, origin = p.eta, "from_eta_mu"
    if eta > 1.0:
        eta, origin = 1.0 / eta, "from_eta_mu_folded"
    return make_profile(
        kappa=(1.0 - eta) / (2.0 * eta),
        mu=2.0 * p.mu_bar,
        m=p.mu_bar,
        mean_power=p.mean_power,
        origin=origin,
    )


def from_hoyt(q: float, mean_power: float) -> FadingProfile:
    """
    Hoyt（Nakagami-q）衰落：η-μ中取 μ̄ = 1/2，η = q²

    Args:
        q: Hoyt参数，0 < q ≤ 1
        mean_power: 平均功率

    Returns:
        FadingProfile: 映射后的参数

    Raises:
        InvalidParameter: q越界
    """
    if not (0.0 < q <= 1.0):
        raise InvalidParameter("from_hoyt", f"q={q} 不在(0, 1]内")
    eta = q * q
    return make_profile(
        kappa=(1.0 - eta) / (2.0 * eta),
        mu=1.0,
        m=0.5,
        mean_power=mean_power,
        origin="from_hoyt",
    )


def from_rician_shadowed(K: float, m: float, mean_power: float) -> FadingProfile:
    """Rician阴影衰落，即μ = 1的κ-μ阴影"""
    return make_profile(kappa=K, mu=1.0, m=m, mean_power=mean_power, origin="from_rician_shadowed")


def eta_mu_params(eta: float, mu_bar: float, mean_power: float) -> EtaMuParams:
    """
    创建η-μ参数

    Raises:
        InvalidParameter: 参数越界
    """
    try:
        return EtaMuParams(eta=eta, mu_bar=mu_bar, mean_power=mean_power)
    except ValidationError as exc:
        raise InvalidParameter("eta_mu_params", _validation_detail(exc)) from exc


def eta_mu_scales(p: EtaMuParams) -> Tuple[float, float]:
    """
    η-μ功率分解为两个独立Gamma(μ̄)分量时的归一化尺度 (a1, a2)，a1 ≤ a2

    a1 = η/(μ̄(1+η))，a2 = 1/(μ̄(1+η))（η > 1 时交换）；乘以γ̄即为实际尺度。
    """
    a_small = p.eta / (p.mu_bar * (1.0 + p.eta))
    a_large = 1.0 / (p.mu_bar * (1.0 + p.eta))
    return (a_small, a_large) if a_small <= a_large else (a_large, a_small)


# ---------------------------------------------------------------------------
# 概率密度与分布函数
# ---------------------------------------------------------------------------

def pdf(p: Profile, x: float, cfg: SeriesConfig = None) -> float:
    """
    κ-μ阴影概率密度
    f(x) = x^(μ−1) e^(−x/θ) 1F1(m; μ; x/θ − x/λ) / (θ^(μ−m) λ^m Γ(μ))

    Args:
        p: 衰落参数（KappaMuProfile时使用Bessel形式）
        x: 功率值，x ≥ 0
        cfg: 级数配置

    Returns:
        float: 密度值
    """
    if isinstance(p, KappaMuProfile):
        return kappa_mu_pdf(p, x)
    if x < 0:
        raise InvalidParameter("pdf", "x必须非负")
    mu, m, theta, lam = p.mu, p.m, p.theta, p.lambda_
    if x == 0.0:
        if mu > 1.0:
            return 0.0
        if mu < 1.0:
            return math.inf
        return math.exp(-(mu - m) * math.log(theta) - m * math.log(lam))
    log_f, sign = log_kummer_1f1(m, mu, x / theta - x / lam, cfg)
    log_value = ((mu - 1.0) * math.log(x) - x / theta + log_f
                 - (mu - m) * math.log(theta) - m * math.log(lam) - special.gammaln(mu))
    return sign * math.exp(log_value)


def kappa_mu_pdf(p: KappaMuProfile, x: float) -> float:
    """
    κ-μ概率密度（Bessel形式）

    Args:
        p: κ-μ参数
        x: 功率值，x ≥ 0

    Returns:
        float: 密度值
    """
    if x < 0:
        raise InvalidParameter("kappa_mu_pdf", "x必须非负")
    kappa, mu, gbar = p.kappa, p.mu, p.mean_power
    if kappa == 0.0:
        return float(stats.gamma.pdf(x, mu, scale=p.theta))
    if x == 0.0:
        if mu > 1.0:
            return 0.0
        if mu < 1.0:
            return math.inf
        return (1.0 + kappa) * math.exp(-kappa) / gbar
    z = 2.0 * mu * math.sqrt(kappa * (1.0 + kappa) * x / gbar)
    log_value = (math.log(mu) + 0.5 * (mu + 1.0) * math.log1p(kappa) - 0.5 * (mu - 1.0) * math.log(kappa)
                 - mu * kappa - math.log(gbar) + 0.5 * (mu - 1.0) * math.log(x / gbar)
                 - mu * (1.0 + kappa) * x / gbar + math.log(special.ive(mu - 1.0, z)) + z)
    return math.exp(log_value)


def eta_mu_pdf_direct(p: EtaMuParams, x: float) -> float:
    """
    η-μ（格式一）概率密度，修正Bessel函数形式：
    f(γ) = 2√π μ̄^(μ̄+1/2) h^μ̄ γ^(μ̄−1/2) e^(−2μ̄hγ/γ̄) I_(μ̄−1/2)(2μ̄Hγ/γ̄) / (Γ(μ̄) H^(μ̄−1/2) γ̄^(μ̄+1/2))

    H→0（η = 1）时 I_ν(2μ̄Hy)/H^ν 取极限 (μ̄y)^ν/Γ(ν+1)。

    Args:
        p: η-μ参数
        x: 功率值，x ≥ 0

    Returns:
        float: 密度值
    """
    if x < 0:
        raise InvalidParameter("eta_mu_pdf_direct", "x必须非负")
    mu_bar, h, H, gbar = p.mu_bar, p.h, abs(p.H), p.mean_power
    nu = mu_bar - 0.5
    if x == 0.0:
        # 密度在0处的行为由 γ^(2μ̄−1) 决定
        if mu_bar > 0.5:
            return 0.0
        if mu_bar < 0.5:
            return math.inf
        return 2.0 * math.sqrt(math.pi) * mu_bar * h ** mu_bar / (special.gamma(mu_bar) * gbar)
    y = x / gbar
    z = 2.0 * mu_bar * H * y
    if H < 1e-12:
        log_bessel_ratio = nu * math.log(mu_bar * y) - special.gammaln(nu + 1.0)
    else:
        log_bessel_ratio = math.log(special.ive(nu, z)) + z - nu * math.log(H)
    log_value = (math.log(2.0 * math.sqrt(math.pi)) + (mu_bar + 0.5) * math.log(mu_bar) + mu_bar * math.log(h)
                 + nu * math.log(y) - special.gammaln(mu_bar) - math.log(gbar)
                 - 2.0 * mu_bar * h * y + log_bessel_ratio)
    return math.exp(log_value)


def cdf(p: Profile, x: float, cfg: SeriesConfig = None) -> float:
    """
    κ-μ阴影分布函数
    F(x) = x^μ Φ2(μ−m, m; μ+1; −x/θ, −x/λ) / (θ^(μ−m) λ^m Γ(μ+1))

    Φ2在内部以最负自变量为轴做指数缩放，得到非负项级数。

    Args:
        p: 衰落参数
        x: 功率值，x ≥ 0
        cfg: 级数配置

    Returns:
        float: 分布函数值，截断到[0, 1]
    """
    if isinstance(p, KappaMuProfile):
        return float(cdf_mixture(p, np.array([x]))[0])
    if x < 0:
        raise InvalidParameter("cdf", "x必须非负")
    if x == 0.0:
        return 0.0
    mu, m, theta, lam = p.mu, p.m, p.theta, p.lambda_
    log_phi, sign = log_phi2_n((mu - m, m), mu + 1.0, (-x / theta, -x / lam), cfg)
    log_value = (mu * math.log(x) + log_phi - (mu - m) * math.log(theta) - m * math.log(lam)
                 - special.gammaln(mu + 1.0))
    return min(1.0, max(0.0, sign * math.exp(log_value)))


def log_mixture_weights(p: Profile, count: int) -> np.ndarray:
    """
    混合权重的对数 log w_k，k = 0..count−1

    κ-μ阴影：w_k = (θ/λ)^m (m)_k q^k / k!，q = μκ/(μκ+m)
    κ-μ：w_k = e^(−μκ)(μκ)^k / k!
    """
    k = np.arange(count, dtype=float)
    if isinstance(p, KappaMuProfile):
        rate = p.mu * p.kappa
        return -rate + special.xlogy(k, rate) - special.gammaln(k + 1.0)
    q = p.mixture_q
    return (p.m * math.log(p.theta / p.lambda_) + special.gammaln(p.m + k) - special.gammaln(p.m)
            + special.xlogy(k, q) - special.gammaln(k + 1.0))


def _mixture_law(p: Profile):
    if isinstance(p, KappaMuProfile):
        return stats.poisson(p.mu * p.kappa)
    return stats.nbinom(p.m, p.theta / p.lambda_)


def cdf_mixture(p: Profile, x: np.ndarray) -> np.ndarray:
    """
    按混合结构计算分布函数：F(x) = Σ_k w_k·P(μ+k, x/θ)，对x向量化

    Args:
        p: 衰落参数
        x: 功率值数组

    Returns:
        np.ndarray: 分布函数值
    """
    x = np.asarray(x, dtype=float)
    count = int(_mixture_law(p).ppf(1.0 - _MIXTURE_TAIL)) + 2
    weights = np.exp(log_mixture_weights(p, count))
    shapes = p.mu + np.arange(count, dtype=float)
    flat = np.clip(x.ravel(), 0.0, None) / p.theta
    values = special.gammainc(shapes[None, :], flat[:, None]) @ weights
    return np.clip(values, 0.0, 1.0).reshape(x.shape)


def sample_power(p: Profile, rng: np.random.Generator, size: Optional[int] = None):
    """
    抽取信道功率：阴影S ~ Gamma(m, 1/m)，K ~ Poisson(μκS)，X ~ Gamma(μ+K, θ)

    κ-μ参数没有阴影层，K ~ Poisson(μκ)。

    Args:
        p: 衰落参数
        rng: 调用方持有的随机数生成器
        size: 样本数，None时返回单个值

    Returns:
        float 或 np.ndarray: 功率样本
    """
    if isinstance(p, KappaMuProfile):
        rate = p.mu * p.kappa
    else:
        shadow = rng.gamma(p.m, 1.0 / p.m, size)
        rate = p.mu * p.kappa * shadow
    clusters = rng.poisson(rate, size)
    draws = rng.gamma(p.mu + clusters, p.theta)
    return float(draws) if size is None else draws
