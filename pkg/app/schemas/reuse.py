"""
模块名称：reuse.py
主要功能：频率复用方案配置的Pydantic模式
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ReuseConfig(BaseModel):
    """
    FFR/SFR配置

    Attributes:
        scheme: 复用方案
        S_t: 中心/边缘用户划分门限（线性）
        beta: SFR边缘用户功率因子
        prbs: 每小区PRB数
        users_per_cell: 每小区用户数
        classification_prb_count: 判为中心用户所需的PRB数
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scheme: Literal["FFR", "SFR"] = Field("FFR", description="复用方案")
    S_t: float = Field(..., gt=0, description="划分门限（线性）")
    beta: float = Field(1.0, ge=1, description="SFR功率因子")
    prbs: int = Field(50, ge=1, description="PRB数")
    users_per_cell: int = Field(25, ge=1, description="每小区用户数")
    classification_prb_count: int = Field(25, ge=1, description="判定所需PRB数")

    @model_validator(mode="after")
    def sharing_rule(self):
        """PRB数必须足以在用户间均分，且判定PRB数不超过总数"""
        if self.prbs < self.users_per_cell:
            raise ValueError("PRB数少于用户数")
        if self.classification_prb_count > self.prbs:
            raise ValueError("判定PRB数超过PRB总数")
        return self

    @property
    def prbs_per_user(self) -> int:
        """每个用户分到的PRB数"""
        return self.prbs // self.users_per_cell
