"""
模块名称：simulation.py
主要功能：蒙特卡洛仿真配置与估计结果的Pydantic模式
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class McConfig(BaseModel):
    """
    蒙特卡洛配置

    Attributes:
        iterations: 批次数
        batch_size: 每批样本数
        seed: 64位随机种子
        confidence: 置信水平
        threads: 工作线程数
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    iterations: int = Field(..., ge=2, description="批次数")
    batch_size: int = Field(100, ge=1, description="每批样本数")
    seed: int = Field(0, ge=0, lt=2**64, description="随机种子")
    confidence: Literal[0.95, 0.99] = Field(0.95, description="置信水平")
    threads: int = Field(1, ge=1, description="工作线程数")


class McEstimate(BaseModel):
    """
    批均值估计结果

    Attributes:
        mean: 总体均值
        ci_lo: 置信区间下限
        ci_hi: 置信区间上限
        batches: 批次数
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mean: float = Field(..., description="均值")
    ci_lo: float = Field(..., description="置信下限")
    ci_hi: float = Field(..., description="置信上限")
    batches: int = Field(..., ge=1, description="批次数")

    @model_validator(mode="after")
    def ordered(self):
        """置信区间必须包含均值"""
        if not (self.ci_lo <= self.mean <= self.ci_hi):
            raise ValueError("置信区间不包含均值")
        return self

    def contains(self, value: float) -> bool:
        """判断value是否落在置信区间内"""
        return self.ci_lo <= value <= self.ci_hi

    @property
    def half_width(self) -> float:
        """置信区间半宽"""
        return 0.5 * (self.ci_hi - self.ci_lo)
