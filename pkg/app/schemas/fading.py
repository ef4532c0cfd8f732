"""
模块名称：fading.py
主要功能：衰落模型参数的Pydantic模式（κ-μ阴影、κ-μ、η-μ）
"""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

Origin = Literal["native", "from_eta_mu", "from_eta_mu_folded", "from_hoyt", "from_rician_shadowed"]


class FadingProfile(BaseModel):
    """
    κ-μ阴影衰落参数

    Attributes:
        kappa: 主导分量与散射分量功率比
        mu: 簇数
        m: 阴影严重程度（有限值）
        mean_power: 平均功率
        origin: 参数来源标记
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kappa: float = Field(..., ge=0, description="功率比κ")
    mu: float = Field(..., gt=0, description="簇数μ")
    m: float = Field(..., gt=0, description="阴影参数m")
    mean_power: float = Field(..., gt=0, description="平均功率")
    origin: Origin = Field("native", description="参数来源")

    @field_validator("kappa", "mu", "m", "mean_power")
    def must_be_finite(cls, v):
        """参数必须为有限值"""
        if not math.isfinite(v):
            raise ValueError("参数必须为有限值")
        return v

    @computed_field
    @property
    def theta(self) -> float:
        """尺度参数θ = γ̄/(μ(1+κ))"""
        return self.mean_power / (self.mu * (1.0 + self.kappa))

    @computed_field
    @property
    def lambda_(self) -> float:
        """尺度参数λ = (μκ+m)γ̄/(μ(1+κ)m)"""
        return self.theta * (self.mu * self.kappa + self.m) / self.m

    @property
    def mixture_q(self) -> float:
        """负二项混合参数 1-θ/λ = μκ/(μκ+m)"""
        return self.mu * self.kappa / (self.mu * self.kappa + self.m)

    def scaled(self, factor: float) -> "FadingProfile":
        """返回平均功率乘以factor后的新参数"""
        return self.model_copy(update={"mean_power": self.mean_power * factor})


class KappaMuProfile(BaseModel):
    """
    κ-μ衰落参数（m→∞ 的极限）

    Attributes:
        kappa: 功率比
        mu: 簇数
        mean_power: 平均功率
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kappa: float = Field(..., ge=0, description="功率比κ")
    mu: float = Field(..., gt=0, description="簇数μ")
    mean_power: float = Field(..., gt=0, description="平均功率")

    @field_validator("kappa", "mu", "mean_power")
    def must_be_finite(cls, v):
        """参数必须为有限值"""
        if not math.isfinite(v):
            raise ValueError("参数必须为有限值")
        return v

    @computed_field
    @property
    def theta(self) -> float:
        """尺度参数θ"""
        return self.mean_power / (self.mu * (1.0 + self.kappa))

    def scaled(self, factor: float) -> "KappaMuProfile":
        """返回平均功率乘以factor后的新参数"""
        return self.model_copy(update={"mean_power": self.mean_power * factor})


class EtaMuParams(BaseModel):
    """
    η-μ衰落参数（格式一）

    Attributes:
        eta: 同相与正交分量功率比
        mu_bar: 簇数的一半
        mean_power: 平均功率
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    eta: float = Field(..., gt=0, description="功率比η")
    mu_bar: float = Field(..., gt=0, description="参数μ̄")
    mean_power: float = Field(..., gt=0, description="平均功率")

    @field_validator("eta", "mu_bar", "mean_power")
    def must_be_finite(cls, v):
        """参数必须为有限值"""
        if not math.isfinite(v):
            raise ValueError("参数必须为有限值")
        return v

    @computed_field
    @property
    def h(self) -> float:
        """h = (2+η⁻¹+η)/4"""
        return (2.0 + 1.0 / self.eta + self.eta) / 4.0

    @computed_field
    @property
    def H(self) -> float:
        """H = (η⁻¹−η)/4"""
        return (1.0 / self.eta - self.eta) / 4.0

    def scaled(self, factor: float) -> "EtaMuParams":
        """返回平均功率乘以factor后的新参数"""
        return self.model_copy(update={"mean_power": self.mean_power * factor})
