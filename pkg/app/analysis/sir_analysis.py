"""
模块名称：sir_analysis.py
主要功能：干扰受限链路的中断概率与遍历速率计算

说明：
    期望信号功率是负二项（κ-μ时为Poisson）加权的Gamma(μ+p, θ)混合；
    每个干扰贡献两个"槽位"：参数μ_i−m_i、尺度θ_i，以及参数m_i、尺度λ_i。
    槽位按尺度升序排列，因此方位对称的输入得到相同的数值路径。

    - outage_series：F_D级数形式（截断到P项）
    - outage_ed：E_D形式，以最小尺度槽位为轴变换后求和
    - outage_eta_mu / outage_hoyt：η-μ与Hoyt特例
    - truncation_bound / required_terms：截断误差界与自动选择P
    - rate_*：遍历速率及其独立校验路线
    - typical_user：按面积均匀分布的用户平均
"""

import itertools
import math
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy import special

from app.analysis.fading import eta_mu_scales, from_eta_mu, log_mixture_weights
from app.analysis.geometry import link_budget, place_user
from app.analysis.hypergeom import (
    EdArgs,
    FdArgs,
    eps_cumulative,
    fd_integral_oracle,
    graded_legendre_nodes,
    log_ed_function,
    log_lauricella_fd_batch,
    log_phi2_n,
    quad_checked,
)
from app.core.config import settings
from app.core.errors import InvalidParameter, NonConvergence, NumericalError
from app.core.logging import get_logger
from app.schemas.analysis import OutageResult, SirProblem
from app.schemas.fading import EtaMuParams, FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout
from app.schemas.series import SeriesConfig

logger = get_logger(__name__)

Terms = Union[int, str, None]


class Slots(NamedTuple):
    """干扰槽位：参数b与尺度φ，按φ升序"""

    b: np.ndarray
    phi: np.ndarray

    @property
    def total(self) -> float:
        """Σb = Σμ_i"""
        return float(self.b.sum())


def interferer_slots(interferers: Sequence[FadingProfile]) -> Slots:
    """
    干扰信号的槽位分解，参数为0的槽位不参与计算

    Args:
        interferers: 干扰参数

    Returns:
        Slots: 槽位
    """
    b, phi = [], []
    for h in interferers:
        b += [h.mu - h.m, h.m]
        phi += [h.theta, h.lambda_]
    b_arr, phi_arr = np.asarray(b, dtype=float), np.asarray(phi, dtype=float)
    keep = b_arr != 0.0
    order = np.argsort(phi_arr[keep], kind="stable")
    return Slots(b=b_arr[keep][order], phi=phi_arr[keep][order])


def _eta_mu_slots(interferers: Sequence[EtaMuParams]) -> Slots:
    """η-μ干扰按两个Gamma(μ̄)分量分解的槽位"""
    b, phi = [], []
    for h in interferers:
        a1, a2 = eta_mu_scales(h)
        b += [h.mu_bar, h.mu_bar]
        phi += [a1 * h.mean_power, a2 * h.mean_power]
    b_arr, phi_arr = np.asarray(b, dtype=float), np.asarray(phi, dtype=float)
    order = np.argsort(phi_arr, kind="stable")
    return Slots(b=b_arr[order], phi=phi_arr[order])


def _cfg(cfg: Optional[SeriesConfig]) -> SeriesConfig:
    return cfg if cfg is not None else SeriesConfig.from_settings()


def _require_integer_mu(soi, op: str) -> int:
    if abs(soi.mu - round(soi.mu)) > 1e-12:
        raise InvalidParameter(op, f"期望信号μ={soi.mu} 不是整数")
    return int(round(soi.mu))


def coverage(result: OutageResult) -> float:
    """覆盖概率 P(SIR > T) = 1 − 中断概率"""
    return result.coverage


# ---------------------------------------------------------------------------
# 干扰分布
# ---------------------------------------------------------------------------

def interference_cdf(interferers: Sequence[FadingProfile], y: float, cfg: SeriesConfig = None) -> float:
    """
    总干扰 I = Σh_i 的分布函数
    F_I(y) = y^B Φ2^(2N)(b; 1+B; −y/φ) / (∏φ^b Γ(1+B))，B = Σμ_i

    Args:
        interferers: 干扰参数
        y: 干扰功率
        cfg: 级数配置

    Returns:
        float: 分布函数值
    """
    if y < 0:
        raise InvalidParameter("interference_cdf", "y必须非负")
    if y == 0.0:
        return 0.0
    slots = interferer_slots(interferers)
    B = slots.total
    log_phi, sign = log_phi2_n(tuple(slots.b), 1.0 + B, tuple(-y / slots.phi), cfg)
    log_value = B * math.log(y) + log_phi - float(slots.b @ np.log(slots.phi)) - special.gammaln(1.0 + B)
    return min(1.0, max(0.0, sign * math.exp(log_value)))


# ---------------------------------------------------------------------------
# 截断误差界
# ---------------------------------------------------------------------------

# 保留项求和的舍入余量
_ROUNDING_SLACK = 64.0 * np.finfo(float).eps


def _mixture_tail(soi, P: int) -> float:
    """混合指标超过P的概率，即被截断部分的总权重"""
    if isinstance(soi, KappaMuProfile):
        return float(special.gammainc(P + 1.0, soi.mu * soi.kappa))
    q = soi.mixture_q
    if q == 0.0:
        return 0.0
    return float(special.betainc(P + 1.0, soi.m, q))


def truncation_bound(p: SirProblem, P: int) -> float:
    """
    截断P项后的误差上界 |O − O_P|

    O_P = Σ_(p≤P) w_p·(1 − C_(μ+p)) / (1 − t)，t为被舍去的权重和。真值与O_P的差为
    Σ_(p>P) w_p·(1 − C_(μ+p)) − t·O_P，两项都落在 [0, t] 内，
    因此误差不超过t，再加上保留项求和的舍入余量。

    Args:
        p: SIR问题
        P: 截断项数

    Returns:
        float: 误差上界，不超过1
    """
    if P < 0:
        raise InvalidParameter("truncation_bound", "P必须非负")
    tail = _mixture_tail(p.soi, P)
    if tail == 0.0:
        return 0.0
    return min(1.0, tail + _ROUNDING_SLACK)


def required_terms(p: SirProblem, epsilon: float = None) -> int:
    """
    使截断误差界低于epsilon的最小P

    Args:
        p: SIR问题
        epsilon: 目标误差，缺省取配置AUTO_P_EPSILON

    Returns:
        int: 所需项数

    Raises:
        NonConvergence: 在AUTO_P_MAX内未达到目标
    """
    epsilon = settings.AUTO_P_EPSILON if epsilon is None else epsilon
    for P in range(settings.AUTO_P_MAX + 1):
        if truncation_bound(p, P) < epsilon:
            logger.debug("auto_terms", P=P, epsilon=epsilon)
            return P
    raise NonConvergence("required_terms", f"P上限{settings.AUTO_P_MAX}内误差界未低于{epsilon}")


def resolve_terms(p: SirProblem, P: Terms) -> int:
    """把 None / "auto" / 整数 统一为截断项数"""
    if P is None:
        return settings.DEFAULT_TRUNCATION_P
    if P == "auto":
        return required_terms(p)
    if isinstance(P, str) or int(P) != P or P < 0:
        raise InvalidParameter("resolve_terms", f"P={P!r} 非法")
    return int(P)


# ---------------------------------------------------------------------------
# 中断概率：F_D级数形式
# ---------------------------------------------------------------------------

def _series_terms(soi, slots: Slots, T: float, P: int, cfg: SeriesConfig):
    """
    混合权重w_p与覆盖项w_p·C_(μ+p)，p ≤ P，其中
    C_s = ∏x^b·Γ(s+B)/(Γ(s)Γ(1+B))·F_D(1−s, b; 1+B; x)，x_j = θ/(θ+Tφ_j)
    """
    B = slots.total
    log_w = log_mixture_weights(soi, P + 1)
    active = np.flatnonzero(log_w > -745.0)
    s = soi.mu + active.astype(float)
    x = 1.0 / (1.0 + T * slots.phi / soi.theta)
    logs, signs = log_lauricella_fd_batch(1.0 - s, tuple(slots.b), 1.0 + B, tuple(x), cfg)
    log_c = (float(slots.b @ np.log(x)) + special.gammaln(s + B) - special.gammaln(s)
             - special.gammaln(1.0 + B) + logs)
    return np.exp(log_w[active]), signs * np.exp(log_w[active] + log_c)


def _outage_series_value(soi, slots: Slots, T: float, P: int, cfg: SeriesConfig) -> float:
    """截断中断概率 Σ_(p≤P) w_p·(1 − C_(μ+p)) / Σ_(p≤P) w_p"""
    weights, covered = _series_terms(soi, slots, T, P, cfg)
    return math.fsum(weights.tolist() + (-covered).tolist()) / math.fsum(weights.tolist())


def outage_series(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None) -> OutageResult:
    """
    中断概率的F_D级数形式（截断到前P项）

    保留项按其权重和归一化，T→0与T→∞时分别精确趋于0与1。

    Args:
        p: SIR问题
        P: 截断项数；None取默认值，"auto"按误差界自动选择
        cfg: 级数配置

    Returns:
        OutageResult: 中断概率、使用项数与误差界

    Raises:
        NonConvergence: 级数未收敛
    """
    cfg = _cfg(cfg)
    P = resolve_terms(p, P)
    slots = interferer_slots(p.interferers)
    value = min(1.0, max(0.0, _outage_series_value(p.soi, slots, p.T, P, cfg)))
    bound = truncation_bound(p, P)
    method = "kappa_mu_soi" if isinstance(p.soi, KappaMuProfile) else "fd_series"
    logger.debug("outage_series", T=p.T, N=p.n, P=P, value=value, bound=bound)
    return OutageResult(value=value, terms_used=P, error_bound=bound, method=method)



def outage_soi_kappa_mu(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None) -> OutageResult:
    """
    期望信号为κ-μ（m→∞）时的中断概率：混合权重取 e^(−μκ)(μκ)^p/p!

    Raises:
        InvalidParameter: 期望信号不是KappaMuProfile
    """
    if not isinstance(p.soi, KappaMuProfile):
        raise InvalidParameter("outage_soi_kappa_mu", "期望信号必须为κ-μ参数")
    return outage_series(p, P, cfg)


# ---------------------------------------------------------------------------
# 中断概率：E_D形式
# ---------------------------------------------------------------------------

def _outage_ed_core(mu: float, m: float, theta: float, lam: float, slots: Slots, T: float,
                    cfg: SeriesConfig) -> float:
    """
    以最小尺度槽位φ_min为轴的E_D表示：
    O = 1 − K·c^(B+μ)·E_D(B+μ; m, 1, b_j; μ, 1+B; q·c, 1−c, θ(1−φ_min/φ_j)/(θ+Tφ_min))，
    c = Tφ_min/(θ+Tφ_min)，q = 1 − θ/λ，
    K = Γ(B+μ)θ^(B+m)∏φ^(−b) / (Γ(1+B)T^B λ^m Γ(μ))
    """
    B = slots.total
    a = B + mu
    phi_min = float(slots.phi[0])
    denom = theta + T * phi_min
    c = T * phi_min / denom
    q = 1.0 - theta / lam
    others = theta * (1.0 - phi_min / slots.phi[1:]) / denom
    args = EdArgs(
        a=a,
        b=(m, 1.0) + tuple(float(v) for v in slots.b[1:]),
        c=mu,
        c_prime=1.0 + B,
        x=(q * c, 1.0 - c) + tuple(float(v) for v in others),
    )
    log_ed, sign = log_ed_function(args, cfg)
    log_k = (special.gammaln(a) + (B + m) * math.log(theta) - float(slots.b @ np.log(slots.phi))
             - special.gammaln(1.0 + B) - B * math.log(T) - m * math.log(lam) - special.gammaln(mu))
    cov = sign * math.exp(log_k + a * math.log(c) + log_ed)
    return min(1.0, max(0.0, 1.0 - cov))


def outage_ed(p: SirProblem, cfg: SeriesConfig = None) -> OutageResult:
    """
    中断概率的E_D形式，与F_D级数形式相互独立

    Args:
        p: SIR问题（期望信号需为有限m的κ-μ阴影）
        cfg: 级数配置

    Returns:
        OutageResult: 中断概率

    Raises:
        DomainError: 变换后参数不在收敛域内
        NonConvergence: 级数未收敛
    """
    if isinstance(p.soi, KappaMuProfile):
        raise InvalidParameter("outage_ed", "E_D形式需要有限m的期望信号")
    cfg = _cfg(cfg)
    soi = p.soi
    value = _outage_ed_core(soi.mu, soi.m, soi.theta, soi.lambda_, interferer_slots(p.interferers), p.T, cfg)
    return OutageResult(value=value, method="ed_form")


# ---------------------------------------------------------------------------
# η-μ与Hoyt
# ---------------------------------------------------------------------------

def outage_eta_mu(soi: EtaMuParams, interferers: Sequence[EtaMuParams], T: float, P: Terms = None,
                  cfg: SeriesConfig = None, cross_check: bool = True) -> OutageResult:
    """
    期望信号与干扰均为η-μ衰落时的中断概率

    各η-μ参数映射为κ-μ阴影后按F_D级数求值；cross_check为True时
    同时按两分量Gamma参数化走E_D路线，偏差超过1e-8时记录警告。

    Args:
        soi: 期望信号参数（已含路径损耗）
        interferers: 干扰参数（已含路径损耗）
        T: 目标SIR（线性）
        P: 截断项数
        cfg: 级数配置
        cross_check: 是否执行第二路线校验

    Returns:
        OutageResult: 中断概率
    """
    cfg = _cfg(cfg)
    problem = SirProblem(soi=from_eta_mu(soi), interferers=tuple(from_eta_mu(h) for h in interferers), T=T)
    mapped = outage_series(problem, P, cfg)
    if cross_check:
        try:
            direct = outage_eta_mu_direct(soi, interferers, T, cfg)
        except NumericalError as exc:
            logger.warning("eta_mu_cross_check_failed", error=str(exc))
        else:
            gap = abs(direct.value - mapped.value)
            if gap > 1e-8 + mapped.error_bound:
                logger.warning("eta_mu_routes_disagree", mapped=mapped.value, direct=direct.value, gap=gap)
    return mapped.model_copy(update={"method": "eta_mu"})


def outage_eta_mu_direct(soi: EtaMuParams, interferers: Sequence[EtaMuParams], T: float,
                         cfg: SeriesConfig = None) -> OutageResult:
    """
    η-μ中断概率的直接参数化：功率写成尺度a1·γ̄、a2·γ̄的两个Gamma(μ̄)之和，
    经E_D形式求值

    Returns:
        OutageResult: 中断概率
    """
    cfg = _cfg(cfg)
    a1, a2 = eta_mu_scales(soi)
    value = _outage_ed_core(
        mu=2.0 * soi.mu_bar,
        m=soi.mu_bar,
        theta=a1 * soi.mean_power,
        lam=a2 * soi.mean_power,
        slots=_eta_mu_slots(interferers),
        T=T,
        cfg=cfg,
    )
    return OutageResult(value=value, method="eta_mu")


def outage_hoyt(q: float, mean_power: float, interferers: Sequence[EtaMuParams], T: float,
                cfg: SeriesConfig = None) -> OutageResult:
    """
    期望信号为Hoyt衰落时的单个F_D闭式：
    覆盖概率 = (θ/λ)^(1/2)·∏x^b·F_D^(2N+1)(1/2; 1, b; 1; q', q'·y)，
    θ = a1γ̄，λ = a2γ̄，q' = 1 − θ/λ，x_j = θ/(θ+Tφ_j)，y_j = 1 − x_j

    Args:
        q: Hoyt参数，0 < q ≤ 1
        mean_power: 期望信号平均功率（已含路径损耗）
        interferers: η-μ干扰参数（已含路径损耗）
        T: 目标SIR（线性）
        cfg: 级数配置

    Returns:
        OutageResult: 中断概率

    Raises:
        InvalidParameter: q越界
        DomainError: F_D自变量越界
    """
    if not (0.0 < q <= 1.0):
        raise InvalidParameter("outage_hoyt", f"q={q} 不在(0, 1]内")
    cfg = _cfg(cfg)
    eta = q * q
    theta = 2.0 * eta / (1.0 + eta) * mean_power
    lam = 2.0 / (1.0 + eta) * mean_power
    ratio = 1.0 - theta / lam
    slots = _eta_mu_slots(interferers)
    x = theta / (theta + T * slots.phi)
    y = 1.0 - x
    logs, signs = log_lauricella_fd_batch(
        [0.5], (1.0,) + tuple(float(v) for v in slots.b), 1.0, (ratio,) + tuple(float(v) for v in ratio * y), cfg
    )
    log_cov = 0.5 * math.log(theta / lam) + float(slots.b @ np.log(x)) + float(logs[0])
    value = min(1.0, max(0.0, 1.0 - float(signs[0]) * math.exp(log_cov)))
    return OutageResult(value=value, method="hoyt")


# ---------------------------------------------------------------------------
# 特征函数反演（独立校验）
# ---------------------------------------------------------------------------

def outage_gil_pelaez(p: SirProblem, quad_tol: Optional[float] = None) -> OutageResult:
    """
    对 D = g − T·I 的特征函数做Gil-Pelaez反演：P(D < 0) = 1/2 − (1/π)∫₀^∞ Im φ_D(ω)/ω dω

    κ-μ阴影功率的矩母函数为 (1−sθ)^(m−μ)(1−sλ)^(−m)，κ-μ为 (1−sθ)^(−μ)exp(μκsθ/(1−sθ))。

    Args:
        p: SIR问题
        quad_tol: 积分容差，缺省取配置QUAD_TOL

    Returns:
        OutageResult: 中断概率
    """
    soi = p.soi
    slots = interferer_slots(p.interferers)
    theta = soi.theta

    def log_cf(omega: float) -> complex:
        s = 1j * omega
        if isinstance(soi, KappaMuProfile):
            log_g = -soi.mu * np.log(1.0 - s * theta) + soi.mu * soi.kappa * s * theta / (1.0 - s * theta)
        else:
            log_g = (soi.m - soi.mu) * np.log(1.0 - s * theta) - soi.m * np.log(1.0 - s * soi.lambda_)
        log_i = -np.sum(slots.b * np.log(1.0 + s * p.T * slots.phi))
        return log_g + log_i

    def integrand(v: float) -> float:
        if v == 0.0:
            return 0.0
        return float(np.exp(log_cf(v / theta)).imag / v)

    head = quad_checked(integrand, 0.0, 1.0, quad_tol, "outage_gil_pelaez")
    tail = quad_checked(integrand, 1.0, np.inf, quad_tol, "outage_gil_pelaez")
    value = 0.5 - (head + tail) / math.pi
    return OutageResult(value=min(1.0, max(0.0, value)), method="gil_pelaez")


# ---------------------------------------------------------------------------
# 遍历速率
# ---------------------------------------------------------------------------

def _rate_nodes():
    """z ∈ (0, 1) 上的积分节点：(0, 1/2] 二进加密，[1/2, 1] 四等分"""
    left_nodes, left_weights = graded_legendre_nodes(levels=120, order=12)
    t, w = special.roots_legendre(12)
    edges = np.linspace(0.5, 1.0, 5)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
    right_nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    right_weights = (half[:, None] * w[None, :]).ravel()
    return np.concatenate((left_nodes, right_nodes)), np.concatenate((left_weights, right_weights))


def _rate_integer(soi, slots: Slots, P: int) -> float:
    """
    R = ∫₀^∞ 覆盖(T)/(1+T) dT = ∫₀¹ 覆盖((1−z)/z)/z dz

    整数μ时覆盖概率为 Σ_p w_p ∏x^b Σ_(k<μ+p) ε_k(1−x)，x_j(z) = zθ/(zθ+(1−z)φ_j)，
    对所有积分节点一次性向量化。
    """
    mu_int = int(round(soi.mu))
    z, weights = _rate_nodes()
    zt = z[:, None] * soi.theta
    zp = (1.0 - z)[:, None] * slots.phi[None, :]
    X = zt / (zt + zp)
    Y = zp / (zt + zp)
    log_w = log_mixture_weights(soi, P + 1)
    active = np.flatnonzero(log_w > -745.0)
    cum = eps_cumulative(slots.b, Y, mu_int + P)
    prefactor = np.exp(np.log(X) @ slots.b)
    cov = prefactor * (cum[:, mu_int + active - 1] @ np.exp(log_w[active]))
    return math.fsum((weights * cov / z).tolist())


def rate_shadowed(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None) -> float:
    """
    期望信号为整数μ的κ-μ阴影时的遍历速率 E[ln(1+SIR)]（nats/s/Hz）

    Args:
        p: SIR问题
        P: 截断项数
        cfg: 级数配置

    Returns:
        float: 速率

    Raises:
        InvalidParameter: 期望信号μ不是整数或不是κ-μ阴影参数
    """
    if isinstance(p.soi, KappaMuProfile):
        raise InvalidParameter("rate_shadowed", "期望信号必须为κ-μ阴影参数")
    _require_integer_mu(p.soi, "rate_shadowed")
    P = resolve_terms(p, P)
    return _rate_integer(p.soi, interferer_slots(p.interferers), P)


def rate_kappa_mu(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None) -> float:
    """
    期望信号为整数μ的κ-μ衰落时的遍历速率

    Raises:
        InvalidParameter: 期望信号μ不是整数或不是κ-μ参数
    """
    if not isinstance(p.soi, KappaMuProfile):
        raise InvalidParameter("rate_kappa_mu", "期望信号必须为κ-μ参数")
    _require_integer_mu(p.soi, "rate_kappa_mu")
    P = resolve_terms(p, P)
    return _rate_integer(p.soi, interferer_slots(p.interferers), P)


def ergodic_rate(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None) -> float:
    """按期望信号类型选择rate_kappa_mu或rate_shadowed"""
    if isinstance(p.soi, KappaMuProfile):
        return rate_kappa_mu(p, P, cfg)
    return rate_shadowed(p, P, cfg)


def rate_by_integration(p: SirProblem, P: Terms = None, cfg: SeriesConfig = None,
                        quad_tol: Optional[float] = None) -> float:
    """
    速率的数值积分校验：R = ∫₀^∞ (1 − O(e^t − 1)) dt

    κ-μ阴影期望信号的O取E_D形式，与速率级数不共享求值路径；κ-μ期望信号的O取截断F_D级数，
    此时P才起作用。

    Args:
        p: SIR问题
        P: 截断项数（仅κ-μ期望信号）
        cfg: 级数配置
        quad_tol: 积分容差，缺省取配置QUAD_TOL

    Returns:
        float: 速率
    """
    cfg = _cfg(cfg)
    soi = p.soi
    slots = interferer_slots(p.interferers)
    if isinstance(soi, KappaMuProfile):
        P = resolve_terms(p, P)

        def outage(T: float) -> float:
            return _outage_series_value(soi, slots, T, P, cfg)
    else:
        def outage(T: float) -> float:
            return _outage_ed_core(soi.mu, soi.m, soi.theta, soi.lambda_, slots, T, cfg)

    def integrand(t: float) -> float:
        if t > 700.0:
            return 0.0
        T = math.expm1(t)
        if T == 0.0:
            return 1.0
        return 1.0 - outage(T)

    return quad_checked(integrand, 0.0, np.inf, quad_tol, "rate_by_integration")


def _multi_indices(dims: int, max_total: int):
    """总次数不超过max_total的全部多重指标"""
    for total in range(max_total + 1):
        for cut in itertools.combinations(range(total + dims - 1), dims - 1):
            bounds = (-1,) + cut + (total + dims - 1,)
            yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(dims))


def rate_multi_index(p: SirProblem, P: int, quad_tol: Optional[float] = None) -> float:
    """
    速率的多重指标展开（小规模校验用）

    对每个多重指标i（|i| < μ+p），令η = b + i，ρ_j = φ_j/θ：
    ∫₀^∞ ∏x^b y^i dT/(1+T) = ∏ρ^i·B(|i|+1, B)·F_D(|i|+1, η; Ση+1; 1−ρ)，
    其中F_D由积分表示求值。

    Args:
        p: SIR问题（期望信号μ为整数）
        P: 截断项数
        quad_tol: 积分容差，缺省取配置QUAD_TOL

    Returns:
        float: 速率
    """
    mu_int = _require_integer_mu(p.soi, "rate_multi_index")
    slots = interferer_slots(p.interferers)
    B = slots.total
    rho = slots.phi / p.soi.theta
    log_w = log_mixture_weights(p.soi, P + 1)
    dims = slots.b.size
    inner = {}
    for idx in _multi_indices(dims, mu_int + P - 1):
        i = np.asarray(idx, dtype=float)
        total = int(i.sum())
        eta = slots.b + i
        coef = math.prod(
            special.poch(bj, ij) / math.factorial(int(ij)) * rj ** ij for bj, ij, rj in zip(slots.b, i, rho)
        )
        fd = fd_integral_oracle(
            FdArgs(a=total + 1.0, b=tuple(float(v) for v in eta), c=float(eta.sum()) + 1.0,
                   x=tuple(float(v) for v in 1.0 - rho)),
            quad_tol,
        )
        inner[total] = inner.get(total, 0.0) + coef * special.beta(total + 1.0, B) * fd
    cumulative = np.cumsum([inner.get(k, 0.0) for k in range(mu_int + P)])
    weights = np.exp(log_w)
    return math.fsum(weights[k] * cumulative[mu_int + k - 1] for k in range(P + 1))


# ---------------------------------------------------------------------------
# 典型用户
# ---------------------------------------------------------------------------

def typical_user(metric: Union[str, Callable[[float], float]], layout: NetworkLayout,
                 soi: Union[FadingProfile, KappaMuProfile], interferers: Sequence[FadingProfile],
                 T: float, radial_grid: Sequence[float], alpha: float, azimuth: float = 0.0,
                 P: Terms = None, cfg: SeriesConfig = None, order: int = 8) -> float:
    """
    按面积均匀分布的典型用户平均：∫₀^R metric(r)·2r/R² dr

    Args:
        metric: "outage"、"rate"，或以r为自变量的函数
        layout: 基站布局
        soi: 期望信号参数（发射端平均功率）
        interferers: 干扰参数（发射端平均功率）
        T: 目标SIR（线性）
        radial_grid: 从0严格升序到R的网格
        alpha: 路径损耗指数
        azimuth: 用户方位角
        P: 截断项数
        cfg: 级数配置
        order: 每个网格区间的Gauss–Legendre阶数

    Returns:
        float: 平均值
    """
    grid = np.asarray(radial_grid, dtype=float)
    R = layout.R
    if grid.size < 2 or grid[0] != 0.0 or abs(grid[-1] - R) > 1e-9 * R or np.any(np.diff(grid) <= 0):
        raise InvalidParameter("typical_user", "径向网格必须从0严格升序到R")

    if callable(metric):
        evaluate = metric
    elif metric in ("outage", "rate"):
        def evaluate(r: float) -> float:
            link = place_user(layout, r, azimuth, alpha)
            problem = link_budget(link, soi, interferers, T)
            if metric == "outage":
                return outage_series(problem, P, cfg).value
            return ergodic_rate(problem, P, cfg)
    else:
        raise InvalidParameter("typical_user", f"未知指标{metric!r}")

    t, w = special.roots_legendre(order)
    total = []
    for lo, hi in zip(grid[:-1], grid[1:]):
        nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        values = np.array([evaluate(float(r)) for r in nodes])
        total.append(0.5 * (hi - lo) * float(np.sum(w * values * 2.0 * nodes / R ** 2)))
    return math.fsum(total)
