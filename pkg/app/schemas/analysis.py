"""
模块名称：analysis.py
主要功能：SIR分析问题与结果的Pydantic模式
"""

from typing import Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.fading import FadingProfile, KappaMuProfile

Method = Literal["ed_form", "fd_series", "eta_mu", "hoyt", "kappa_mu_soi", "gil_pelaez"]


class SirProblem(BaseModel):
    """
    干扰受限链路的SIR问题

    Attributes:
        soi: 期望信号衰落参数（已含路径损耗）
        interferers: 干扰信号衰落参数（已含路径损耗）
        T: 目标SIR（线性值）
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    soi: Union[FadingProfile, KappaMuProfile] = Field(..., description="期望信号参数")
    interferers: Tuple[FadingProfile, ...] = Field(..., min_length=1, description="干扰信号参数")
    T: float = Field(..., gt=0, description="目标SIR（线性）")

    @property
    def n(self) -> int:
        """干扰个数N"""
        return len(self.interferers)

    def with_threshold(self, T: float) -> "SirProblem":
        """返回替换门限后的新问题"""
        return self.model_copy(update={"T": T})


class OutageResult(BaseModel):
    """
    中断概率计算结果

    Attributes:
        value: 中断概率 P(SIR < T)
        terms_used: 使用的截断项数P
        error_bound: 截断误差上界
        method: 计算方法
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    value: float = Field(..., ge=0, le=1, description="中断概率")
    terms_used: int = Field(0, ge=0, description="截断项数P")
    error_bound: float = Field(0.0, ge=0, description="截断误差上界")
    method: Method = Field(..., description="计算方法")

    @property
    def coverage(self) -> float:
        """覆盖概率 P(SIR > T)"""
        return 1.0 - self.value
