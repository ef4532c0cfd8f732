"""
包名称：schemas
功能说明：Pydantic模式定义包，用于参数校验与结果序列化
"""

from app.schemas.analysis import OutageResult, SirProblem
from app.schemas.fading import EtaMuParams, FadingProfile, KappaMuProfile
from app.schemas.network import NetworkLayout, UserLink
from app.schemas.reuse import ReuseConfig
from app.schemas.run import ClassifyRequest, ClassifyResponse, RateResponse, RunConfig, ScenarioBlock, SirRequest
from app.schemas.series import EdArgs, FdArgs, SeriesConfig
from app.schemas.simulation import McConfig, McEstimate

__all__ = [
    "OutageResult",
    "SirProblem",
    "EtaMuParams",
    "FadingProfile",
    "KappaMuProfile",
    "NetworkLayout",
    "UserLink",
    "ReuseConfig",
    "ClassifyRequest",
    "ClassifyResponse",
    "RateResponse",
    "RunConfig",
    "ScenarioBlock",
    "SirRequest",
    "EdArgs",
    "FdArgs",
    "SeriesConfig",
    "McConfig",
    "McEstimate",
]
