"""
模块名称：geometry.py
主要功能：两层六边形蜂窝布局、用户放置、干扰距离与路径损耗后的链路预算
"""

import math
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.core.errors import DimensionMismatch, InvalidParameter
from app.core.logging import get_logger
from app.schemas.analysis import SirProblem
from app.schemas.fading import FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout, UserLink

logger = get_logger(__name__)


def _ring(radius: float, odd: bool) -> np.ndarray:
    """半径radius上的6个点，odd为True时偏转30°"""
    steps = np.arange(1, 12, 2) if odd else np.arange(0, 11, 2)
    return radius * np.exp(1j * np.pi * steps / 6)


def build_two_tier_hex(R: float, radius_convention: str = "apothem", tiers: int = 2) -> NetworkLayout:
    """
    构建六边形蜂窝布局，服务基站位于原点（下标0）

    第一层6个基站位于站间距D处（方位角k·60°）；第二层6个位于√3·D（30°+k·60°），
    6个位于2D（k·60°）。apothem约定下 D = 2R，circumradius约定下 D = √3R。

    Args:
        R: 小区半径（米）
        radius_convention: 半径约定
        tiers: 干扰层数（1或2）

    Returns:
        NetworkLayout: 基站布局

    Raises:
        InvalidParameter: R ≤ 0或参数非法
    """
    if not (R > 0 and math.isfinite(R)):
        raise InvalidParameter("build_two_tier_hex", f"R={R} 必须为正")
    isd = 2.0 * R if radius_convention == "apothem" else math.sqrt(3.0) * R
    rings = [np.zeros(1, dtype=complex), _ring(isd, odd=False)]
    if tiers >= 2:
        rings += [_ring(math.sqrt(3.0) * isd, odd=True), _ring(2.0 * isd, odd=False)]
    points = np.concatenate(rings)
    try:
        layout = NetworkLayout(
            R=R,
            tiers=tiers,
            radius_convention=radius_convention,
            bs_positions=tuple((float(z.real), float(z.imag)) for z in points),
        )
    except ValidationError as exc:
        raise InvalidParameter("build_two_tier_hex", str(exc)) from exc
    logger.debug("layout_built", R=R, convention=radius_convention, cells=points.size)
    return layout


def cell_colors(layout: NetworkLayout) -> np.ndarray:
    """
    蜂窝格点的三着色：格点 i·v1 + j·v2（v1 = (D, 0)，v2 = D·e^(iπ/3)）着色为 (i + 2j) mod 3

    相邻小区颜色不同；与服务小区同色的为第二层的6个角点小区。

    Args:
        layout: 基站布局

    Returns:
        np.ndarray: 每个基站的颜色（0、1、2），服务小区为0
    """
    d = layout.inter_site_distance
    pos = layout.positions
    j = np.rint(pos[:, 1] / (d * math.sin(math.pi / 3))).astype(int)
    i = np.rint(pos[:, 0] / d - 0.5 * j).astype(int)
    return np.mod(i + 2 * j, 3)


def place_user(layout: NetworkLayout, r: float, azimuth: float, alpha: float) -> UserLink:
    """
    把用户放在距服务基站r、方位角azimuth处，计算到各干扰基站的欧氏距离

    Args:
        layout: 基站布局
        r: 服务距离（米），0 < r ≤ R
        azimuth: 方位角（弧度）
        alpha: 路径损耗指数

    Returns:
        UserLink: 用户链路几何

    Raises:
        InvalidParameter: r越界或几何非法
    """
    if not (0.0 < r <= layout.R):
        raise InvalidParameter("place_user", f"r={r} 不在(0, R]内")
    user = np.array([r * math.cos(azimuth), r * math.sin(azimuth)])
    d = np.hypot(*(layout.positions[1:] - user).T)
    try:
        return UserLink(r=r, azimuth=azimuth, alpha=alpha, d=tuple(float(v) for v in d))
    except ValidationError as exc:
        raise InvalidParameter("place_user", str(exc)) from exc


def link_budget(link: UserLink, soi: Union[FadingProfile, KappaMuProfile],
                interferers: Sequence[FadingProfile], T: float = 1.0) -> SirProblem:
    """
    路径损耗缩放：期望信号平均功率乘以r^(−α)，第i个干扰乘以d_i^(−α)

    Args:
        link: 用户链路
        soi: 期望信号参数（发射端平均功率γ̄′）
        interferers: 干扰信号参数，与link.d一一对应
        T: 目标SIR（线性）

    Returns:
        SirProblem: 路径损耗后的SIR问题

    Raises:
        DimensionMismatch: 干扰个数与距离个数不一致
    """
    if len(interferers) != len(link.d):
        raise DimensionMismatch("link_budget", f"干扰参数{len(interferers)}个，距离{len(link.d)}个")
    scaled = tuple(p.scaled(d ** -link.alpha) for p, d in zip(interferers, link.d))
    return SirProblem(soi=soi.scaled(link.r ** -link.alpha), interferers=scaled, T=T)


def dump_layout_csv(layout: NetworkLayout, path: Union[str, Path]) -> Path:
    """
    导出基站坐标CSV（bs_index, x_m, y_m）

    Args:
        layout: 基站布局
        path: 输出路径

    Returns:
        Path: 写入的文件路径
    """
    path = Path(path)
    pos = layout.positions
    frame = pd.DataFrame({"bs_index": np.arange(pos.shape[0]), "x_m": pos[:, 0], "y_m": pos[:, 1]})
    frame.to_csv(path, index=False, float_format="%.12g")
    return path
