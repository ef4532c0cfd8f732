"""
模块名称：network.py
主要功能：蜂窝网络几何相关的Pydantic模式（基站布局与用户链路）
"""

import math
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class NetworkLayout(BaseModel):
    """
    两层六边形蜂窝布局

    Attributes:
        R: 小区半径（米）
        tiers: 干扰层数
        radius_convention: 半径含义，apothem为中心到边，circumradius为中心到顶点
        bs_positions: 基站坐标，下标0为服务基站
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    R: float = Field(..., gt=0, description="小区半径（米）")
    tiers: int = Field(2, ge=1, le=2, description="干扰层数")
    radius_convention: Literal["apothem", "circumradius"] = Field("apothem", description="半径约定")
    bs_positions: Tuple[Tuple[float, float], ...] = Field(..., description="基站坐标（米）")

    @property
    def positions(self) -> np.ndarray:
        """基站坐标数组，形状(n, 2)"""
        return np.asarray(self.bs_positions, dtype=float)

    @property
    def n_interferers(self) -> int:
        """干扰基站个数"""
        return len(self.bs_positions) - 1

    @property
    def inter_site_distance(self) -> float:
        """相邻基站间距"""
        return 2.0 * self.R if self.radius_convention == "apothem" else math.sqrt(3.0) * self.R


class UserLink(BaseModel):
    """
    用户链路几何

    Attributes:
        r: 到服务基站的距离（米）
        azimuth: 用户方位角（弧度）
        alpha: 路径损耗指数
        d: 到各干扰基站的距离（米）
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    r: float = Field(..., gt=0, description="服务距离（米）")
    azimuth: float = Field(0.0, description="方位角（弧度）")
    alpha: float = Field(..., ge=2, description="路径损耗指数")
    d: Tuple[float, ...] = Field(..., min_length=1, description="干扰距离（米）")

    @field_validator("d")
    def distances_positive(cls, v):
        """干扰距离必须为正"""
        if any(not (di > 0) for di in v):
            raise ValueError("干扰距离必须大于0")
        return v

    @model_validator(mode="after")
    def finite_geometry(self):
        """几何量必须为有限值"""
        if not (math.isfinite(self.r) and math.isfinite(self.alpha)):
            raise ValueError("几何参数必须为有限值")
        return self
