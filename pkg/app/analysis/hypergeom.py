"""
模块名称：hypergeom.py
主要功能：超几何函数族的数值求值，包括Pochhammer符号、1F1、2F1、3F2、
         Lauricella F_D、多元合流函数Φ2、E_D函数，以及基于积分表示的独立校验器

说明：
    所有Gamma/Pochhammer比值均以"对数模+符号"的形式计算，级数项在对数域中
    累积后再做补偿求和。多元级数按总次数分壳求和，壳系数
    e_k = [w^k] ∏(1 − x_j w)^(−b_j) 由幂和递推得到，同一组(b, x)只计算一次。
"""

import functools
import math
import threading
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from app.core.config import settings
from app.core.errors import DomainError, InvalidParameter, NonConvergence, QuadratureFailure
from app.core.logging import get_logger
from app.schemas.series import EdArgs, FdArgs, SeriesConfig

logger = get_logger(__name__)

_CHUNK = 512
_STRUCT_TOL = 1e-12


def _cfg(cfg: SeriesConfig = None) -> SeriesConfig:
    """返回级数配置，缺省时使用全局配置"""
    return cfg if cfg is not None else SeriesConfig.from_settings()


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _log_sum(logs: np.ndarray, signs: np.ndarray) -> Tuple[float, float]:
    """
    对 Σ sign_k·exp(log_k) 做缩放后的补偿求和

    Args:
        logs: 各项对数模
        signs: 各项符号

    Returns:
        Tuple[float, float]: 和的对数模与符号
    """
    logs = np.asarray(logs, dtype=float)
    signs = np.asarray(signs, dtype=float)
    mask = (signs != 0) & np.isfinite(logs)
    if not mask.any():
        return -math.inf, 0.0
    top = float(np.max(logs[mask]))
    total = math.fsum((signs[mask] * np.exp(logs[mask] - top)).tolist())
    if total == 0.0:
        return -math.inf, 0.0
    return top + math.log(abs(total)), math.copysign(1.0, total)


def _from_log(log_value: float, sign: float) -> float:
    if sign == 0.0:
        return 0.0
    return sign * math.exp(log_value)


# ---------------------------------------------------------------------------
# Pochhammer
# ---------------------------------------------------------------------------

def log_pochhammer(a: float, k: int) -> Tuple[float, float]:
    """
    Pochhammer符号的对数模与符号

    Args:
        a: 参数
        k: 非负整数阶

    Returns:
        Tuple[float, float]: (log|(a)_k|, sign)，值为0时返回(-inf, 0)
    """
    if k < 0:
        raise InvalidParameter("pochhammer", "k必须为非负整数")
    if k == 0:
        return 0.0, 1.0
    if _is_nonpositive_integer(a):
        n = int(-a)
        if k > n:
            return -math.inf, 0.0
        return float(special.gammaln(n + 1) - special.gammaln(n - k + 1)), (-1.0) ** k
    log_value = float(special.gammaln(a + k) - special.gammaln(a))
    sign = float(special.gammasgn(a + k) * special.gammasgn(a))
    return log_value, sign


def pochhammer(a: float, k: int) -> float:
    """
    Pochhammer符号 (a)_k = Γ(a+k)/Γ(a)，负整数a按有限项规则处理

    Args:
        a: 参数
        k: 非负整数阶

    Returns:
        float: (a)_k
    """
    return _from_log(*log_pochhammer(a, k))


def _log_poch_ratio_seq(num: Sequence[float], den: Sequence[float], start: int, stop: int):
    """
    ∏(num+i)/∏(den+i) 在 i ∈ [start, stop) 上的逐项对数模与符号（未累积）
    """
    i = np.arange(start, stop, dtype=float)
    logs = np.zeros_like(i)
    signs = np.ones_like(i)
    with np.errstate(divide="ignore"):
        for v in num:
            f = v + i
            logs += np.log(np.abs(f))
            signs *= np.sign(f)
        for v in den:
            f = v + i
            logs -= np.log(np.abs(f))
            signs *= np.sign(f)
    return logs, signs


# ---------------------------------------------------------------------------
# 广义超几何级数 pFq
# ---------------------------------------------------------------------------

def _log_pfq(num: Sequence[float], den: Sequence[float], x: float, cfg: SeriesConfig,
             op: str) -> Tuple[float, float]:
    """
    pFq 级数的对数域分块求和

    Args:
        num: 分子参数
        den: 分母参数
        x: 自变量
        cfg: 级数配置
        op: 操作名称（用于异常）

    Returns:
        Tuple[float, float]: (log|S|, sign)
    """
    if x == 0.0:
        return 0.0, 1.0
    log_x = math.log(abs(x))
    sign_x = math.copysign(1.0, x)
    all_logs, all_signs = [np.zeros(1)], [np.ones(1)]
    log_term, sign_term = 0.0, 1.0
    k = 0
    while True:
        if k >= cfg.max_total_terms:
            raise NonConvergence(op, f"项数超过{cfg.max_total_terms}")
        stop = k + _CHUNK
        step_logs, step_signs = _log_poch_ratio_seq(list(num), list(den) + [1.0], k, stop)
        step_logs = step_logs + log_x
        step_signs = step_signs * sign_x
        logs = log_term + np.cumsum(step_logs)
        signs = sign_term * np.cumprod(step_signs)
        all_logs.append(logs)
        all_signs.append(signs)
        if np.any(signs == 0):
            break
        log_term, sign_term = float(logs[-1]), float(signs[-1])
        total_log, _ = _log_sum(np.concatenate(all_logs), np.concatenate(all_signs))
        threshold = math.log(cfg.abs_tol + cfg.rel_tol * math.exp(min(total_log, 700.0))) \
            if total_log < 700.0 else total_log + math.log(cfg.rel_tol)
        small = logs < threshold
        decreasing = step_logs < 0
        ok = small & decreasing
        if ok.size >= 3 and np.any(ok[2:] & ok[1:-1] & ok[:-2]):
            break
        k = stop
    return _log_sum(np.concatenate(all_logs), np.concatenate(all_signs))


def log_kummer_1f1(a: float, b: float, x: float, cfg: SeriesConfig = None) -> Tuple[float, float]:
    """
    1F1(a; b; x) 的对数模与符号

    负自变量经Kummer变换 1F1(a;b;x) = e^x·1F1(b−a;b;−x) 转为正项级数，
    a为非正整数时直接求有限和。
    """
    cfg = _cfg(cfg)
    if _is_nonpositive_integer(b):
        raise InvalidParameter("kummer_1f1", "b不能为非正整数")
    if x == 0.0 or a == 0.0:
        return 0.0, 1.0
    if x < 0.0 and not _is_nonpositive_integer(a):
        log_value, sign = _log_pfq([b - a], [b], -x, cfg, "kummer_1f1")
        return log_value + x, sign
    return _log_pfq([a], [b], x, cfg, "kummer_1f1")


def kummer_1f1(a: float, b: float, x: float, cfg: SeriesConfig = None) -> float:
    """
    合流超几何函数 1F1(a; b; x)

    Args:
        a: 分子参数
        b: 分母参数（非正整数非法）
        x: 自变量
        cfg: 级数配置

    Returns:
        float: 函数值

    Raises:
        InvalidParameter: b为非正整数
        NonConvergence: 项数上限内未收敛
    """
    return _from_log(*log_kummer_1f1(a, b, x, cfg))


def gauss_2f1(a: float, b: float, c: float, x: float, cfg: SeriesConfig = None) -> float:
    """
    Gauss超几何函数 2F1(a, b; c; x)

    x < −1/2 时使用Pfaff变换，x > 0.9 时使用1−x连接公式或Euler变换。

    Args:
        a: 分子参数
        b: 分子参数
        c: 分母参数
        x: 自变量
        cfg: 级数配置

    Returns:
        float: 函数值

    Raises:
        InvalidParameter: c为非正整数
        DomainError: x ≥ 1且级数不终止
    """
    cfg = _cfg(cfg)
    if _is_nonpositive_integer(c):
        raise InvalidParameter("gauss_2f1", "c不能为非正整数")
    terminating = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)
    if x == 0.0:
        return 1.0
    if terminating:
        return _from_log(*_log_pfq([a, b], [c], x, cfg, "gauss_2f1"))
    if x < -0.5:
        # Pfaff: 2F1(a,b;c;x) = (1−x)^(−a)·2F1(a, c−b; c; x/(x−1))，x/(x−1) ∈ (1/3, 1)
        return (1.0 - x) ** (-a) * gauss_2f1(a, c - b, c, x / (x - 1.0), cfg)
    if x >= 1.0:
        raise DomainError("gauss_2f1", f"x={x} ≥ 1且级数不终止")
    if x > 0.9:
        s = c - a - b
        if abs(s - round(s)) > 1e-8:
            return _gauss_2f1_connection(a, b, c, x, cfg)
        if s < 0:
            # Euler: (1−x)^(c−a−b)·2F1(c−a, c−b; c; x)
            return (1.0 - x) ** s * _from_log(*_log_pfq([c - a, c - b], [c], x, cfg, "gauss_2f1"))
    return _from_log(*_log_pfq([a, b], [c], x, cfg, "gauss_2f1"))


def _gauss_2f1_connection(a, b, c, x, cfg):
    """x接近1时的1−x连接公式"""
    y = 1.0 - x
    s = c - a - b
    first = special.gamma(c) * special.gamma(s) * special.rgamma(c - a) * special.rgamma(c - b)
    second = special.gamma(c) * special.gamma(-s) * special.rgamma(a) * special.rgamma(b)
    f1 = _from_log(*_log_pfq([a, b], [1.0 - s], y, cfg, "gauss_2f1")) if first != 0 else 0.0
    f2 = _from_log(*_log_pfq([c - a, c - b], [1.0 + s], y, cfg, "gauss_2f1")) if second != 0 else 0.0
    return float(first * f1 + second * y ** s * f2)


def log_clausen_3f2(a1: float, a2: float, a3: float, b1: float, b2: float, x: float,
                    cfg: SeriesConfig = None) -> Tuple[float, float]:
    """3F2的对数模与符号"""
    cfg = _cfg(cfg)
    if _is_nonpositive_integer(b1) or _is_nonpositive_integer(b2):
        raise InvalidParameter("clausen_3f2", "分母参数不能为非正整数")
    terminating = any(_is_nonpositive_integer(v) for v in (a1, a2, a3))
    if not terminating and abs(x) >= 1.0:
        raise DomainError("clausen_3f2", f"|x|={abs(x)} ≥ 1")
    return _log_pfq([a1, a2, a3], [b1, b2], x, cfg, "clausen_3f2")


def clausen_3f2(a1: float, a2: float, a3: float, b1: float, b2: float, x: float,
                cfg: SeriesConfig = None) -> float:
    """
    Clausen函数 3F2(a1, a2, a3; b1, b2; x)

    Args:
        a1, a2, a3: 分子参数
        b1, b2: 分母参数
        x: 自变量，|x| < 1（级数终止时不限）
        cfg: 级数配置

    Returns:
        float: 函数值
    """
    return _from_log(*log_clausen_3f2(a1, a2, a3, b1, b2, x, cfg))


# ---------------------------------------------------------------------------
# 多元级数的壳系数
# ---------------------------------------------------------------------------

class _ShellCoefficients:
    """
    壳系数 ê_k = [w^k] ∏(1 − y_j w)^(−b_j)，其中 y = x/ρ，ρ = max|x|

    通过幂和 σ_n = Σ b_j y_j^n 的递推 k·ê_k = Σ_{n=1..k} σ_n ê_{k−n} 增量扩展。
    """

    def __init__(self, b: Tuple[float, ...], x: Tuple[float, ...]):
        b_arr = np.asarray(b, dtype=float)
        x_arr = np.asarray(x, dtype=float)
        keep = (x_arr != 0.0) & (b_arr != 0.0)
        self.b = b_arr[keep]
        x_arr = x_arr[keep]
        self.rho = float(np.max(np.abs(x_arr))) if x_arr.size else 0.0
        self.y = x_arr / self.rho if self.rho > 0 else x_arr
        self.log_rho = math.log(self.rho) if self.rho > 0 else -math.inf
        self._e = np.zeros(1)
        self._e[0] = 1.0
        self._sigma = np.zeros(1)
        self._lock = threading.Lock()

    @property
    def trivial(self) -> bool:
        """所有变量为0时级数恒为1"""
        return self.rho == 0.0

    def coefficients(self, size: int) -> np.ndarray:
        """
        返回前size个壳系数（按ρ缩放）

        Args:
            size: 需要的系数个数

        Returns:
            np.ndarray: ê_0..ê_{size−1}
        """
        with self._lock:
            have = self._e.size
            if size > have:
                sigma = np.empty(size)
                sigma[:have] = self._sigma
                n = np.arange(have, size, dtype=float)
                for lo in range(0, n.size, 4096):
                    block = n[lo:lo + 4096]
                    sigma[have + lo:have + lo + block.size] = np.power(self.y[None, :], block[:, None]) @ self.b
                e = np.empty(size)
                e[:have] = self._e
                for k in range(have, size):
                    e[k] = np.dot(sigma[1:k + 1], e[k - 1::-1]) / k
                if not np.all(np.isfinite(e)):
                    raise NonConvergence("shell_coefficients", "壳系数溢出")
                self._e, self._sigma = e, sigma
            return self._e[:size]


@functools.lru_cache(maxsize=128)
def _shells(b: Tuple[float, ...], x: Tuple[float, ...]) -> _ShellCoefficients:
    return _ShellCoefficients(b, x)


def _shell_series(shells: _ShellCoefficients, ratio_num: Sequence[float], ratio_den: Sequence[float],
                  cfg: SeriesConfig, op: str, k_min: int = 0, k_exact: int = None) -> Tuple[float, float]:
    """
    Σ_k [∏(num)_k/∏(den)_k]·ρ^k·ê_k 的对数域分壳求和

    Args:
        shells: 壳系数
        ratio_num: 每壳比值的分子Pochhammer参数
        ratio_den: 每壳比值的分母Pochhammer参数
        cfg: 级数配置
        op: 操作名称
        k_min: 最少求和壳数（尾项单调递减前不判收敛）
        k_exact: 终止级数时的精确壳数

    Returns:
        Tuple[float, float]: (log|S|, sign)
    """
    if shells.trivial:
        return 0.0, 1.0
    all_logs, all_signs = [], []
    log_ratio, sign_ratio = 0.0, 1.0
    k = 0
    small_run = 0
    while True:
        stop = k + _CHUNK if k_exact is None else k_exact
        if stop > cfg.max_shells or stop > cfg.max_total_terms:
            raise NonConvergence(op, f"壳数超过上限{cfg.max_shells}")
        e = shells.coefficients(stop)[k:stop]
        step_logs, step_signs = _log_poch_ratio_seq(ratio_num, ratio_den, k, stop)
        # 第k壳的比值为前k个因子的乘积
        prefix_logs = np.concatenate(([log_ratio], log_ratio + np.cumsum(step_logs[:-1])))
        prefix_signs = np.concatenate(([sign_ratio], sign_ratio * np.cumprod(step_signs[:-1])))
        idx = np.arange(k, stop, dtype=float)
        with np.errstate(divide="ignore"):
            logs = prefix_logs + idx * shells.log_rho + np.log(np.abs(e))
        signs = prefix_signs * np.sign(e)
        all_logs.append(logs)
        all_signs.append(signs)
        log_ratio = float(prefix_logs[-1] + step_logs[-1])
        sign_ratio = float(prefix_signs[-1] * step_signs[-1])
        if k_exact is not None or sign_ratio == 0.0:
            break
        total_log, _ = _log_sum(np.concatenate(all_logs), np.concatenate(all_signs))
        tol = cfg.abs_tol + cfg.rel_tol * math.exp(min(total_log, 700.0))
        log_tol = math.log(tol) if total_log < 700.0 else total_log + math.log(cfg.rel_tol)
        for j, value in enumerate(logs):
            if k + j < k_min:
                continue
            small_run = small_run + 1 if value < log_tol else 0
            if small_run >= 3:
                break
        if small_run >= 3:
            break
        k = stop
    return _log_sum(np.concatenate(all_logs), np.concatenate(all_signs))


def _fd_turning_point(a: float, b: Sequence[float], c: float, rho: float) -> int:
    """F_D壳项开始单调递减的大致位置"""
    if rho <= 0:
        return 0
    growth = a - c + sum(abs(v) for v in b) - 1.0
    if growth <= 0 or rho >= 1:
        return 10
    return int(math.ceil(growth / -math.log(rho))) + 10


# ---------------------------------------------------------------------------
# Lauricella F_D
# ---------------------------------------------------------------------------

def _has_cdf_structure(b: Sequence[float], c: float, x: Sequence[float]) -> bool:
    """c = 1 + Σb 且所有 x ∈ (0, 1]"""
    total = float(sum(b))
    return abs(c - 1.0 - total) <= _STRUCT_TOL * max(1.0, abs(c)) and all(0.0 < v <= 1.0 for v in x)


def eps_cumulative(b: Sequence[float], Y: np.ndarray, size: int) -> np.ndarray:
    """
    对每行y计算 Σ_{k<s} ε_k(y)，s = 1..size，其中 ε_k = [w^k] ∏(1 − y_j w)^(−b_j)

    Args:
        b: 参数b_j
        Y: 形状(M, J)的自变量，元素位于[0, 1]
        size: 需要的最大s

    Returns:
        np.ndarray: 形状(M, size)，第s−1列为前s个系数之和
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    b_arr = np.asarray(b, dtype=float)
    M = Y.shape[0]
    sigma = np.zeros((M, size))
    power = np.ones_like(Y)
    for n in range(1, size):
        power = power * Y
        sigma[:, n] = power @ b_arr
    eps = np.zeros((M, size))
    eps[:, 0] = 1.0
    for k in range(1, size):
        eps[:, k] = np.einsum("mi,mi->m", sigma[:, 1:k + 1], eps[:, k - 1::-1]) / k
    return np.cumsum(eps, axis=1)


def _fd_reflected_terminating(s_values: np.ndarray, b: Sequence[float], x: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    F_D(1−s, b; 1+Σb; x)，s为正整数：
    F_D = (s−1)!/(1+Σb)_{s−1} · Σ_{k<s} ε_k(1−x)，各项非负
    """
    B = float(sum(b))
    s_int = np.rint(s_values).astype(int)
    Y = 1.0 - np.asarray(x, dtype=float)[None, :]
    cum = eps_cumulative(b, Y, int(s_int.max()))[0]
    with np.errstate(divide="ignore"):
        logs = (special.gammaln(s_int) + special.gammaln(1.0 + B)
                - special.gammaln(B + s_int) + np.log(cum[s_int - 1]))
    return logs, np.where(cum[s_int - 1] > 0, 1.0, 0.0)


@functools.lru_cache(maxsize=8)
def graded_legendre_nodes(levels: int = 60, order: int = 12) -> Tuple[np.ndarray, np.ndarray]:
    """
    (0, 1/2] 上向0加密的二进分段Gauss–Legendre节点与权重

    Args:
        levels: 二进分段层数，最内层区间为 [0, 2^(−levels−1)]
        order: 每段的Gauss–Legendre阶数

    Returns:
        Tuple[np.ndarray, np.ndarray]: 节点与权重
    """
    t, w = special.roots_legendre(order)
    hi = 0.5 * 2.0 ** -np.arange(levels + 1, dtype=float)
    lo = np.append(hi[1:], 0.0)
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _fd_beta_mixture(s_values: np.ndarray, b: Sequence[float], x: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    F_D(1−s, b; 1+Σb; x)，s > 0 非整数，x ∈ (0, 1]

    记 n = ⌈s⌉ − s，G_s 与 U·G_{s+n}（U ~ Beta(s, n)）同分布，于是
    F_D 化为 Beta(s, n) 权重下终止型成员 Φ(s+n, x(u)) 的积分，
    x_j(u) = u·x_j/(u·x_j + 1 − x_j)。积分在 (0,1/2] 与 [1/2,1) 两侧各用
    二进加密的Gauss–Legendre规则，右侧先扣除 Φ(u=1) 以消去 (1−u)^(n−1) 奇性。
    """
    b_arr = np.asarray(b, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    B = float(b_arr.sum())
    s_values = np.asarray(s_values, dtype=float)
    n_frac = float(np.ceil(s_values[0]) - s_values[0])
    s_int = np.rint(s_values + n_frac).astype(int)
    size = int(s_int.max())

    half_nodes, half_weights = graded_legendre_nodes()
    # 左侧节点 u ∈ (0, 1/2]，右侧节点 u = 1 − v，v ∈ (0, 1/2]
    u = np.concatenate((half_nodes, 1.0 - half_nodes, [1.0]))
    log_u = np.log(u)
    log_1mu = np.concatenate((np.log1p(-half_nodes), np.log(half_nodes), [-np.inf]))
    denom = u[:, None] * x_arr[None, :] + (1.0 - x_arr[None, :])
    X = u[:, None] * x_arr[None, :] / denom
    Y = (1.0 - x_arr[None, :]) / denom
    log_px = np.log(X) @ b_arr
    cum = eps_cumulative(b_arr, Y, size)[:, s_int - 1]
    g = np.exp(log_px)[:, None] * cum

    nl = half_nodes.size
    g_left, g_right, g_one = g[:nl], g[nl:2 * nl], g[-1]
    log_beta = special.betaln(s_values, n_frac)
    dens_left = np.exp((s_values[None, :] - 1.0) * log_u[:nl, None]
                       + (n_frac - 1.0) * log_1mu[:nl, None] - log_beta[None, :])
    dens_right = np.exp((s_values[None, :] - 1.0) * log_u[nl:2 * nl, None]
                        + (n_frac - 1.0) * log_1mu[nl:2 * nl, None] - log_beta[None, :])
    left = half_weights @ (dens_left * g_left)
    right = half_weights @ (dens_right * (g_right - g_one[None, :]))
    tail = g_one * special.betainc(n_frac, s_values, 0.5)
    J = left + right + tail

    with np.errstate(divide="ignore"):
        logs = (special.gammaln(s_values) + special.gammaln(1.0 + B) - special.gammaln(s_values + B)
                - log_px[-1] + np.log(np.abs(J)))
    return logs, np.sign(J)


def _fd_log(a: float, b: Sequence[float], c: float, x: Sequence[float], cfg: SeriesConfig,
            op: str = "lauricella_fd") -> Tuple[float, float]:
    """单个F_D值的对数模与符号（路由选择见 lauricella_fd）"""
    logs, signs = _fd_log_batch(np.array([a], dtype=float), b, c, x, cfg, op)
    return float(logs[0]), float(signs[0])


def _fd_log_batch(a_values: np.ndarray, b: Sequence[float], c: float, x: Sequence[float],
                  cfg: SeriesConfig, op: str = "lauricella_fd") -> Tuple[np.ndarray, np.ndarray]:
    """共享(b, c, x)的一族F_D值"""
    b = tuple(float(v) for v in b)
    x = tuple(float(v) for v in x)
    a_values = np.asarray(a_values, dtype=float)
    logs = np.empty(a_values.size)
    signs = np.empty(a_values.size)
    if all(v == 0.0 for v in x):
        return np.zeros(a_values.size), np.ones(a_values.size)

    terminating = np.array([_is_nonpositive_integer(a) for a in a_values])
    structured = _has_cdf_structure(b, c, x)
    if not terminating.all() and max(abs(v) for v in x) >= 1.0:
        raise DomainError(op, "max|x_i| ≥ 1且级数不终止")

    if structured:
        s_values = 1.0 - a_values
        if terminating.any():
            route_idx = np.flatnonzero(terminating)
            logs[route_idx], signs[route_idx] = _fd_reflected_terminating(s_values[route_idx], b, x)
        rest = np.flatnonzero(~terminating & (s_values > 0))
        if rest.size:
            fracs = np.round(np.ceil(s_values[rest]) - s_values[rest], 12)
            for frac in np.unique(fracs):
                group = rest[fracs == frac]
                logs[group], signs[group] = _fd_beta_mixture(s_values[group], b, x)
        handled = terminating | (s_values > 0)
        logger.debug("fd_route", op=op, route="probabilistic", count=int(handled.sum()))
    else:
        handled = np.zeros(a_values.size, dtype=bool)

    shells = None
    for i in np.flatnonzero(~handled):
        a = float(a_values[i])
        if shells is None:
            shells = _shells(b, x)
        if terminating[i]:
            n = int(-a)
            if max(x) > 0.5 and min(x) >= 0.0 and max(x) <= 1.0:
                logs[i], signs[i] = _fd_reflection_general(a, b, c, x, cfg, op)
                continue
            logs[i], signs[i] = _shell_series(shells, [a], [c], cfg, op, k_exact=n + 1)
        else:
            k_min = _fd_turning_point(a, b, c, shells.rho)
            logs[i], signs[i] = _shell_series(shells, [a], [c], cfg, op, k_min=k_min)
    return logs, signs


def _fd_reflection_general(a, b, c, x, cfg, op):
    """
    终止型反射 F_D(−n, b; c; x) = (c−Σb)_n/(c)_n · F_D(−n, b; 1+Σb−c−n; 1−x)
    """
    n = int(-a)
    B = float(sum(b))
    c_ref = 1.0 + B - c - n
    if _is_nonpositive_integer(c_ref) and -c_ref < n:
        return _shell_series(_shells(tuple(b), tuple(x)), [a], [c], cfg, op, k_exact=n + 1)
    log_num, sign_num = log_pochhammer(c - B, n)
    log_den, sign_den = log_pochhammer(c, n)
    if sign_num == 0.0:
        return -math.inf, 0.0
    y = tuple(1.0 - v for v in x)
    log_s, sign_s = _shell_series(_shells(tuple(b), y), [a], [c_ref], cfg, op, k_exact=n + 1)
    return log_num - log_den + log_s, sign_num * sign_den * sign_s


def lauricella_fd(args: FdArgs, cfg: SeriesConfig = None) -> float:
    """
    Lauricella第四类超几何函数 F_D^(N)(a, b; c; x)

    求值路线：
        1. c = 1+Σb 且 x ∈ (0,1]：a为非正整数时用1−x反射得到非负项有限和，
           否则用Beta混合积分；
        2. 其余情形按总次数分壳求和；终止型且 max x > 1/2 时先做反射。

    Args:
        args: F_D参数
        cfg: 级数配置

    Returns:
        float: 函数值

    Raises:
        DomainError: 不终止且 max|x_i| ≥ 1
        NonConvergence: 壳数上限内未收敛
    """
    cfg = _cfg(cfg)
    return _from_log(*_fd_log(args.a, args.b, args.c, args.x, cfg))


def lauricella_fd_batch(a_values: Iterable[float], b: Sequence[float], c: float, x: Sequence[float],
                        cfg: SeriesConfig = None) -> np.ndarray:
    """
    共享(b, c, x)的一族F_D值，壳系数与积分节点只计算一次

    Args:
        a_values: 一组a参数
        b: 参数b_i
        c: 分母参数
        x: 自变量
        cfg: 级数配置

    Returns:
        np.ndarray: 各a对应的F_D值
    """
    logs, signs = log_lauricella_fd_batch(a_values, b, c, x, cfg)
    with np.errstate(over="ignore"):
        return signs * np.exp(logs)


def log_lauricella_fd_batch(a_values: Iterable[float], b: Sequence[float], c: float, x: Sequence[float],
                            cfg: SeriesConfig = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    lauricella_fd_batch的对数形式，返回各值的对数模与符号

    Raises:
        InvalidParameter: 参数非法
    """
    cfg = _cfg(cfg)
    if len(b) != len(x):
        raise InvalidParameter("lauricella_fd_batch", "b与x长度不一致")
    if _is_nonpositive_integer(c):
        raise InvalidParameter("lauricella_fd_batch", "c不能为非正整数")
    return _fd_log_batch(np.fromiter(a_values, dtype=float), b, c, x, cfg)


def fd_pfaff_transform(args: FdArgs) -> Tuple[float, FdArgs]:
    """
    F_D(a, b; c; x) = ∏(1−x_i)^(−b_i)·F_D(c−a, b; c; x/(x−1))

    Args:
        args: 原参数，要求所有 x_i < 1

    Returns:
        Tuple[float, FdArgs]: 前置因子与变换后的参数
    """
    if any(v >= 1.0 for v in args.x):
        raise DomainError("fd_pfaff_transform", "x_i必须小于1")
    prefactor = math.exp(-sum(bi * math.log1p(-xi) for bi, xi in zip(args.b, args.x)))
    new_x = tuple(v / (v - 1.0) for v in args.x)
    return prefactor, FdArgs(a=args.c - args.a, b=args.b, c=args.c, x=new_x)


def fd_pivot_transform(args: FdArgs, pivot: int) -> Tuple[float, FdArgs]:
    """
    以第pivot个变量为轴的变换：
    F_D(a, b; c; x) = (1−x_k)^(−a)·F_D(a, b'; c; x')，
    其中 b'_k = c − Σb，x'_k = x_k/(x_k−1)，x'_j = (x_k − x_j)/(x_k − 1)

    Args:
        args: 原参数，要求 x_k < 1
        pivot: 轴变量下标

    Returns:
        Tuple[float, FdArgs]: 前置因子与变换后的参数
    """
    xk = args.x[pivot]
    if xk >= 1.0:
        raise DomainError("fd_pivot_transform", "轴变量必须小于1")
    new_b = list(args.b)
    new_b[pivot] = args.c - sum(args.b)
    new_x = [(xk - xj) / (xk - 1.0) for xj in args.x]
    new_x[pivot] = xk / (xk - 1.0)
    prefactor = math.exp(-args.a * math.log1p(-xk))
    return prefactor, FdArgs(a=args.a, b=tuple(new_b), c=args.c, x=tuple(new_x))


# ---------------------------------------------------------------------------
# 积分校验器
# ---------------------------------------------------------------------------

def quad_checked(func, lower, upper, tol: Optional[float], op: str, **kwargs) -> float:
    """
    scipy自适应积分（QUADPACK）的包装，未达到精度时抛出QuadratureFailure

    Args:
        func: 被积函数
        lower: 积分下限
        upper: 积分上限（可为np.inf）
        tol: 绝对与相对容差，None时取配置QUAD_TOL
        op: 操作名称
        **kwargs: 透传给 scipy.integrate.quad 的参数（如weight、wvar）

    Returns:
        float: 积分值
    """
    tol = settings.QUAD_TOL if tol is None else tol
    result = integrate.quad(func, lower, upper, epsabs=tol, epsrel=tol, limit=500,
                            full_output=1, **kwargs)
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > 100.0 * tol * max(1.0, abs(value)):
        raise QuadratureFailure(op, f"估计误差{abserr:.3e}")
    return float(value)


def fd_integral_oracle(args: FdArgs, quad_tol: Optional[float] = None) -> float:
    """
    F_D的单重积分表示：
    Γ(c)/(Γ(a)Γ(c−a))·∫₀¹ u^(a−1)(1−u)^(c−a−1)∏(1−u·x_i)^(−b_i) du

    Args:
        args: F_D参数，要求 a > 0，c − a > 0，x_i < 1
        quad_tol: 积分容差，缺省取配置QUAD_TOL

    Returns:
        float: 积分值

    Raises:
        DomainError: 积分表示无效
    """
    a, c = args.a, args.c
    if not (a > 0 and c - a > 0 and all(v < 1.0 for v in args.x)):
        raise DomainError("fd_integral_oracle", "需要 a>0, c−a>0, x_i<1")
    b_arr = np.asarray(args.b, dtype=float)
    x_arr = np.asarray(args.x, dtype=float)

    def integrand(u):
        return math.exp(-float(b_arr @ np.log1p(-u * x_arr)))

    value = quad_checked(integrand, 0.0, 1.0, quad_tol, "fd_integral_oracle",
                  weight="alg", wvar=(a - 1.0, c - a - 1.0))
    return value * math.exp(special.gammaln(c) - special.gammaln(a) - special.gammaln(c - a))


# ---------------------------------------------------------------------------
# 多元合流函数 Φ2
# ---------------------------------------------------------------------------

def log_phi2_n(b: Sequence[float], c: float, x: Sequence[float], cfg: SeriesConfig = None) -> Tuple[float, float]:
    """
    Φ2^(N)(b; c; x) 的对数模与符号

    存在负自变量时以最负者x_k为轴：
    Φ2(b; c; x) = e^(x_k)·Φ2(b_{j≠k}, c−Σb; c; x_j − x_k, −x_k)，变换后自变量全部非负。
    """
    cfg = _cfg(cfg)
    if len(b) != len(x):
        raise InvalidParameter("phi2_n", "b与x长度不一致")
    if _is_nonpositive_integer(c):
        raise InvalidParameter("phi2_n", "c不能为非正整数")
    pairs = [(float(bi), float(xi)) for bi, xi in zip(b, x) if xi != 0.0 and bi != 0.0]
    if not pairs:
        return 0.0, 1.0
    bs = [p[0] for p in pairs]
    xs = [p[1] for p in pairs]
    log_pref = 0.0
    k = int(np.argmin(xs))
    if xs[k] < 0.0:
        xk = xs[k]
        new_b = [bj for j, bj in enumerate(bs) if j != k] + [c - sum(bs)]
        new_x = [xj - xk for j, xj in enumerate(xs) if j != k] + [-xk]
        bs, xs, log_pref = new_b, new_x, xk
    shells = _shells(tuple(bs), tuple(xs))
    k_min = int(2.0 * sum(abs(bi * xi) for bi, xi in zip(bs, xs)) + 2.0 * shells.rho) + 10
    log_s, sign_s = _shell_series(shells, [], [c], cfg, "phi2_n", k_min=k_min)
    return log_pref + log_s, sign_s


def phi2_n(b: Sequence[float], c: float, x: Sequence[float], cfg: SeriesConfig = None) -> float:
    """
    多元合流超几何函数 Φ2^(N)(b_1..b_N; c; x_1..x_N)

    Args:
        b: 参数b_i
        c: 分母参数
        x: 自变量（整函数，无定义域限制）
        cfg: 级数配置

    Returns:
        float: 函数值
    """
    return _from_log(*log_phi2_n(b, c, x, cfg))


# ---------------------------------------------------------------------------
# E_D
# ---------------------------------------------------------------------------

def log_ed_function(args: EdArgs, cfg: SeriesConfig = None) -> Tuple[float, float]:
    """
    E_D^(N)(a; b; c, c'; x) = Σ_i (a)_i (b_1)_i x_1^i / ((c)_i i!) · F_D^(N−1)(a+i, b_2..b_N; c'; x_2..x_N)

    Args:
        args: E_D参数
        cfg: 级数配置

    Returns:
        Tuple[float, float]: 函数值的对数模与符号

    Raises:
        DomainError: |x_1| + max|x_j| ≥ 1
        NonConvergence: 外层求和超过单维度上限
    """
    cfg = _cfg(cfg)
    if all(v == 0.0 for v in args.b):
        return 0.0, 1.0
    x1, rest_x = args.x[0], args.x[1:]
    r_rest = max((abs(v) for v in rest_x), default=0.0)
    if abs(x1) + r_rest >= 1.0:
        raise DomainError("ed_function", f"|x_1|+max|x_j| = {abs(x1) + r_rest:.6g} ≥ 1")
    if not rest_x:
        value = gauss_2f1(args.a, args.b[0], args.c, x1, cfg)
        return (math.log(abs(value)), math.copysign(1.0, value)) if value != 0.0 else (-math.inf, 0.0)

    a, b1, c = args.a, args.b[0], args.c
    rest_b = args.b[1:]
    log_terms, sign_terms = [], []
    log_coef, sign_coef = 0.0, 1.0
    log_x1 = math.log(abs(x1)) if x1 != 0.0 else -math.inf
    # 外层项约按 i^growth·(|x_1|/(1−r))^i 变化，指数只由模最大的内层变量决定
    effective = abs(x1) / (1.0 - r_rest)
    top = sum(bj for bj, xj in zip(rest_b, rest_x) if abs(xj) >= r_rest * (1.0 - 1e-12))
    growth = max(0.0, a + b1 - c - 1.0 + top - args.c_prime)
    i_turn = int(math.ceil(growth / -math.log(effective))) + 3 if 0.0 < effective < 1.0 else 0
    small_run = 0
    i = 0
    while True:
        if i > cfg.max_index_per_dim:
            raise NonConvergence("ed_function", f"外层指标超过{cfg.max_index_per_dim}")
        log_fd, sign_fd = _fd_log(a + i, rest_b, args.c_prime, rest_x, cfg, "ed_function")
        log_terms.append(log_coef + log_fd)
        sign_terms.append(sign_coef * sign_fd)
        if x1 == 0.0 or sign_coef == 0.0:
            break
        total_log, _ = _log_sum(np.array(log_terms), np.array(sign_terms))
        tol = cfg.abs_tol + cfg.rel_tol * math.exp(min(total_log, 700.0))
        small_run = small_run + 1 if log_terms[-1] < math.log(tol) else 0
        if small_run >= 3 and i >= i_turn:
            break
        step_num = (a + i) * (b1 + i)
        step_den = (c + i) * (i + 1.0)
        if step_num == 0.0:
            break
        log_coef += math.log(abs(step_num)) - math.log(abs(step_den)) + log_x1
        sign_coef *= math.copysign(1.0, step_num) * math.copysign(1.0, step_den) * math.copysign(1.0, x1)
        i += 1
    logger.debug("ed_outer_terms", count=i + 1)
    return _log_sum(np.array(log_terms), np.array(sign_terms))


def ed_function(args: EdArgs, cfg: SeriesConfig = None) -> float:
    """
    E_D函数值，按第一个变量展开为F_D^(N−1)的单重和（见 log_ed_function）

    Args:
        args: E_D参数
        cfg: 级数配置

    Returns:
        float: 函数值
    """
    return _from_log(*log_ed_function(args, cfg))


def ed_integral_oracle(args: EdArgs, k: int = 1, quad_tol: Optional[float] = None,
                       cfg: SeriesConfig = None) -> float:
    """
    E_D的半无穷积分表示：
    (1/Γ(a))∫₀^∞ e^(−t) t^(a−1) Φ2^(k)(b_1..b_k; c; x t) Φ2^(N−k)(b_{k+1}..b_N; c'; x t) dt

    Args:
        args: E_D参数，要求 a > 0
        k: 使用分母c的变量个数
        quad_tol: 积分容差，缺省取配置QUAD_TOL
        cfg: 级数配置

    Returns:
        float: 积分值

    Raises:
        DomainError: a ≤ 0或k越界
        QuadratureFailure: 积分未达到精度
    """
    cfg = _cfg(cfg)
    if args.a <= 0:
        raise DomainError("ed_integral_oracle", "需要 a > 0")
    if not 0 <= k <= len(args.x):
        raise DomainError("ed_integral_oracle", "k越界")
    b_first, x_first = args.b[:k], np.asarray(args.x[:k])
    b_second, x_second = args.b[k:], np.asarray(args.x[k:])
    log_gamma_a = float(special.gammaln(args.a))

    def log_factors(t):
        log_value, sign = 0.0, 1.0
        if b_first:
            lv, sv = log_phi2_n(b_first, args.c, tuple(x_first * t), cfg)
            log_value, sign = log_value + lv, sign * sv
        if b_second:
            lv, sv = log_phi2_n(b_second, args.c_prime, tuple(x_second * t), cfg)
            log_value, sign = log_value + lv, sign * sv
        return log_value, sign

    def weighted(t):
        # 左段的 t^(a−1) 由 QAWS 权重处理
        lv, sv = log_factors(t)
        return sv * math.exp(lv - t - log_gamma_a) if sv else 0.0

    def full(t):
        lv, sv = log_factors(t)
        return sv * math.exp(lv - t + (args.a - 1.0) * math.log(t) - log_gamma_a) if sv else 0.0

    head = quad_checked(weighted, 0.0, 1.0, quad_tol, "ed_integral_oracle", weight="alg", wvar=(args.a - 1.0, 0.0))
    tail = quad_checked(full, 1.0, np.inf, quad_tol, "ed_integral_oracle")
    return head + tail
