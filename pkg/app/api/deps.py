"""
模块名称：deps.py
主要功能：定义API依赖项，例如级数配置与按请求构造的SIR问题
"""

from typing import Tuple

from app.analysis import scenario
from app.schemas.analysis import SirProblem
from app.schemas.run import SirRequest
from app.schemas.series import SeriesConfig


def get_series_config() -> SeriesConfig:
    """获取按全局配置构造的级数配置

    Returns:
        SeriesConfig: 级数配置。
    """
    return SeriesConfig.from_settings()


def get_problem_and_terms(request: SirRequest) -> Tuple[SirProblem, int]:
    """由请求体构造SIR问题并解析截断项数

    Args:
        request (SirRequest): 单链路请求。

    Returns:
        Tuple[SirProblem, int]: 路径损耗后的SIR问题与截断项数P。
    """
    problem = scenario.build_problem(request)
    return problem, scenario.resolve_series(problem, request.series)
