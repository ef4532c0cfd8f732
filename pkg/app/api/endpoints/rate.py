"""
模块名称：rate.py
主要功能：遍历速率相关的API路由端点
"""

from typing import Tuple

from fastapi import APIRouter, Depends

from app.analysis import sir_analysis
from app.api.deps import get_problem_and_terms, get_series_config
from app.schemas.analysis import SirProblem
from app.schemas.run import RateResponse
from app.schemas.series import SeriesConfig

router = APIRouter()


@router.post("", response_model=RateResponse)
def compute_rate(
    *,
    resolved: Tuple[SirProblem, int] = Depends(get_problem_and_terms),
    cfg: SeriesConfig = Depends(get_series_config)
) -> RateResponse:
    """
    计算单链路遍历速率 E[ln(1+SIR)]，期望信号μ须为整数

    Returns:
        RateResponse: 速率（nats/s/Hz）与截断项数
    """
    problem, P = resolved
    return RateResponse(rate=sir_analysis.ergodic_rate(problem, P, cfg), terms_used=P)
