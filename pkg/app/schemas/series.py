"""
模块名称：series.py
主要功能：超几何级数求值相关的Pydantic模式（级数配置、F_D与E_D参数）
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings


def _is_nonpositive_integer(v: float) -> bool:
    """判断是否为非正整数"""
    return v <= 0 and float(v).is_integer()


class SeriesConfig(BaseModel):
    """
    级数求和配置

    Attributes:
        abs_tol: 绝对容差
        rel_tol: 相对容差
        max_total_terms: 总项数上限
        max_index_per_dim: 单维度指标上限（E_D外层求和使用）
        max_shells: 按总次数分壳求和时的壳层上限
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    abs_tol: float = Field(1e-12, gt=0, description="绝对容差")
    rel_tol: float = Field(1e-10, gt=0, description="相对容差")
    max_total_terms: int = Field(10_000_000, ge=1, description="总项数上限")
    max_index_per_dim: int = Field(200, ge=1, description="单维度指标上限")
    max_shells: int = Field(250_000, ge=1, description="壳层数上限")

    @classmethod
    def from_settings(cls) -> "SeriesConfig":
        """根据全局配置创建默认级数配置"""
        return cls(
            abs_tol=settings.SERIES_ABS_TOL,
            rel_tol=settings.SERIES_REL_TOL,
            max_total_terms=settings.SERIES_MAX_TOTAL_TERMS,
            max_index_per_dim=settings.SERIES_MAX_INDEX_PER_DIM,
            max_shells=settings.SERIES_MAX_SHELLS,
        )


class FdArgs(BaseModel):
    """
    Lauricella F_D^(N) 参数

    Attributes:
        a: 公共分子参数
        b: 各变量分子参数
        c: 分母参数
        x: 自变量
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(..., description="分子参数a")
    b: Tuple[float, ...] = Field(..., min_length=1, description="参数b_i")
    c: float = Field(..., description="分母参数c")
    x: Tuple[float, ...] = Field(..., min_length=1, description="自变量x_i")

    @field_validator("c")
    def c_not_pole(cls, v):
        """c不能为非正整数"""
        if _is_nonpositive_integer(v):
            raise ValueError("c不能为非正整数")
        return v

    @model_validator(mode="after")
    def lengths_match(self):
        """b与x长度必须一致"""
        if len(self.b) != len(self.x):
            raise ValueError("b与x长度不一致")
        return self

    @property
    def n(self) -> int:
        """变量个数"""
        return len(self.x)


class EdArgs(BaseModel):
    """
    E_D^(N) 参数，第一个变量使用分母c，其余变量使用分母c'

    Attributes:
        a: 公共分子参数
        b: 各变量分子参数
        c: 第一个变量的分母参数
        c_prime: 其余变量的分母参数
        x: 自变量
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(..., description="分子参数a")
    b: Tuple[float, ...] = Field(..., min_length=1, description="参数b_i")
    c: float = Field(..., description="分母参数c")
    c_prime: float = Field(..., description="分母参数c'")
    x: Tuple[float, ...] = Field(..., min_length=1, description="自变量x_i")

    @field_validator("c", "c_prime")
    def denominators_not_pole(cls, v):
        """分母参数不能为非正整数"""
        if _is_nonpositive_integer(v):
            raise ValueError("分母参数不能为非正整数")
        return v

    @model_validator(mode="after")
    def lengths_match(self):
        """b与x长度必须一致"""
        if len(self.b) != len(self.x):
            raise ValueError("b与x长度不一致")
        return self
