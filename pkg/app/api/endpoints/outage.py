"""
模块名称：outage.py
主要功能：中断概率相关的API路由端点
"""

from typing import Literal, Tuple

from fastapi import APIRouter, Depends, Query

from app.analysis import sir_analysis
from app.api.deps import get_problem_and_terms, get_series_config
from app.schemas.analysis import OutageResult, SirProblem
from app.schemas.series import SeriesConfig

# 创建路由
router = APIRouter()


@router.post("", response_model=OutageResult)
def compute_outage(
    *,
    resolved: Tuple[SirProblem, int] = Depends(get_problem_and_terms),
    cfg: SeriesConfig = Depends(get_series_config),
    method: Literal["fd_series", "ed_form", "gil_pelaez"] = Query("fd_series", description="计算方法")
) -> OutageResult:
    """
    计算单链路中断概率 P(SIR < T)

    Args:
        resolved: SIR问题与截断项数
        cfg: 级数配置
        method: 计算方法

    Returns:
        OutageResult: 中断概率、截断项数与误差界
    """
    problem, P = resolved
    if method == "ed_form":
        return sir_analysis.outage_ed(problem, cfg)
    if method == "gil_pelaez":
        return sir_analysis.outage_gil_pelaez(problem)
    return sir_analysis.outage_series(problem, P, cfg)
