"""
模块名称：run.py
主要功能：命令行运行配置与HTTP请求体的Pydantic模式
"""

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Command = Literal["outage", "rate", "typical", "mc-validate", "reuse", "sweep"]
SweepVariable = Literal["T_dB", "r_m", "alpha", "azimuth_rad", "kappa", "mu", "m"]


class _Block(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class GeometryBlock(_Block):
    """
    几何配置

    Attributes:
        R_m: 小区半径（米）
        tiers: 干扰层数
        radius_convention: 半径约定
        r_m: 用户到服务基站距离（米）
        azimuth_rad: 用户方位角（弧度）
        alpha: 路径损耗指数
        radial_intervals: 典型用户积分的径向区间数
    """

    R_m: float = Field(1000.0, gt=0, description="小区半径（米）")
    tiers: int = Field(2, ge=1, le=2, description="干扰层数")
    radius_convention: Literal["apothem", "circumradius"] = Field("apothem", description="半径约定")
    r_m: float = Field(..., gt=0, description="服务距离（米）")
    azimuth_rad: float = Field(0.0, description="方位角（弧度）")
    alpha: float = Field(..., ge=2, description="路径损耗指数")
    radial_intervals: int = Field(8, ge=1, description="径向区间数")

    @model_validator(mode="after")
    def user_inside_cell(self):
        """用户必须位于小区内"""
        if self.r_m > self.R_m:
            raise ValueError("r_m 超出小区半径")
        return self


class SoiBlock(_Block):
    """期望信号衰落参数，m取"inf"时为κ-μ衰落"""

    kappa: float = Field(..., ge=0, description="κ")
    mu: float = Field(..., gt=0, description="μ")
    m: Union[Literal["inf"], float] = Field(..., description="m或\"inf\"")
    mean: float = Field(1.0, gt=0, description="发射端平均功率")

    @field_validator("m")
    def m_positive(cls, v):
        """m必须为正"""
        if v != "inf" and not v > 0:
            raise ValueError("m必须大于0")
        return v


class InterfererBlock(_Block):
    """干扰信号衰落参数"""

    kappa: float = Field(..., ge=0, description="κ_i")
    mu: float = Field(..., gt=0, description="μ_i")
    m: float = Field(..., gt=0, description="m_i")
    mean: float = Field(1.0, gt=0, description="发射端平均功率")


class SeriesBlock(_Block):
    """级数截断配置"""

    P: Union[int, Literal["auto"]] = Field(50, description="截断项数或\"auto\"")
    epsilon: float = Field(1e-6, gt=0, description="自动选择P的误差目标")

    @field_validator("P")
    def p_nonnegative(cls, v):
        """P必须非负"""
        if v != "auto" and v < 0:
            raise ValueError("P必须非负")
        return v


class McBlock(_Block):
    """蒙特卡洛配置"""

    seed: int = Field(0, ge=0, lt=2**64, description="随机种子")
    batches: int = Field(..., ge=2, description="批次数")
    batch_size: int = Field(100, ge=1, description="每批样本数")
    confidence: Literal[0.95, 0.99] = Field(0.95, description="置信水平")


class ReuseBlock(_Block):
    """频率复用配置，门限以dB给出"""

    scheme: Literal["FFR", "SFR"] = Field("FFR", description="复用方案")
    S_t_dB: float = Field(..., description="划分门限（dB）")
    beta: float = Field(1.0, ge=1, description="SFR功率因子")
    prbs: int = Field(50, ge=1, description="PRB数")
    users_per_cell: int = Field(25, ge=1, description="每小区用户数")
    classification_prb_count: int = Field(25, ge=1, description="判定所需PRB数")


class SweepBlock(_Block):
    """扫描配置：在[from, to]上取等间距的points个点"""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    variable: SweepVariable = Field(..., description="扫描变量")
    start: float = Field(..., alias="from", description="起点")
    stop: float = Field(..., alias="to", description="终点")
    points: int = Field(..., ge=1, description="点数")


class ScenarioBlock(_Block):
    """单链路场景：几何、期望信号、干扰与门限"""

    geometry: GeometryBlock
    soi: SoiBlock
    interferers: List[InterfererBlock] = Field(..., min_length=1, description="干扰参数（1个、每层1个或每个基站1个）")
    T_dB: float = Field(0.0, description="目标SIR（dB）")
    series: SeriesBlock = Field(default_factory=SeriesBlock)


class RunConfig(ScenarioBlock):
    """
    命令行运行配置

    Attributes:
        command: 运行命令
        metric: typical与sweep命令的指标
        mc: 蒙特卡洛配置，缺省时不做仿真
        reuse: 频率复用配置
        sweep: 扫描配置
    """

    command: Command = Field(..., description="运行命令")
    metric: Literal["outage", "rate"] = Field("outage", description="指标")
    mc: Optional[McBlock] = Field(None, description="蒙特卡洛配置")
    reuse: Optional[ReuseBlock] = Field(None, description="频率复用配置")
    sweep: Optional[SweepBlock] = Field(None, description="扫描配置")

    @model_validator(mode="after")
    def command_blocks(self):
        """各命令需要的配置块必须存在"""
        if self.command == "reuse" and self.reuse is None:
            raise ValueError("reuse命令需要reuse配置块")
        if self.command == "sweep" and self.sweep is None:
            raise ValueError("sweep命令需要sweep配置块")
        if self.command == "mc-validate" and self.mc is None:
            raise ValueError("mc-validate命令需要mc配置块")
        return self


class SirRequest(ScenarioBlock):
    """单链路中断概率或速率请求"""


class ClassifyRequest(ScenarioBlock):
    """中心/边缘划分请求，门限取S_t_dB"""

    S_t_dB: float = Field(..., description="划分门限（dB）")


class RateResponse(BaseModel):
    """速率结果"""

    rate: float = Field(..., description="遍历速率（nats/s/Hz）")
    terms_used: int = Field(..., ge=0, description="截断项数P")


class ClassifyResponse(BaseModel):
    """中心/边缘划分概率"""

    p_centre: float = Field(..., ge=0, le=1, description="中心用户概率")
    p_edge: float = Field(..., ge=0, le=1, description="边缘用户概率")
