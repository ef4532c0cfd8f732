"""
模块名称：reuse.py
主要功能：频率复用相关的API路由端点
"""

from fastapi import APIRouter, Depends

from app.analysis import reuse_planner, scenario
from app.analysis.geometry import place_user
from app.api.deps import get_series_config
from app.schemas.run import ClassifyRequest, ClassifyResponse
from app.schemas.series import SeriesConfig

router = APIRouter()


@router.post("/classify", response_model=ClassifyResponse)
def classify_user(
    *,
    request: ClassifyRequest,
    cfg: SeriesConfig = Depends(get_series_config)
) -> ClassifyResponse:
    """
    按复用1系统的SIR划分中心/边缘用户

    Args:
        request: 场景与划分门限（dB）
        cfg: 级数配置

    Returns:
        ClassifyResponse: 中心与边缘用户概率
    """
    g = request.geometry
    layout = scenario.build_layout(g)
    link = place_user(layout, g.r_m, g.azimuth_rad, g.alpha)
    centre, edge = reuse_planner.classify(
        link,
        scenario.build_soi(request.soi),
        scenario.build_interferers(request.interferers, layout),
        scenario.db_to_linear(request.S_t_dB),
        request.series.P,
        cfg,
    )
    return ClassifyResponse(p_centre=centre, p_edge=edge)
