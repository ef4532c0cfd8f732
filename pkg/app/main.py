"""
模块名称：main.py
主要功能：FastAPI应用入口文件，负责应用的初始化、错误映射和路由注册
"""

from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.api.endpoints import outage, rate, reuse
from app.core.config import settings
from app.core.errors import DimensionMismatch, InvalidParameter, NumericalError
from app.core.logging import configure_logging, get_logger

# 加载环境变量
load_dotenv()

logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    应用生命周期管理

    Args:
        app: FastAPI应用实例

    Yields:
        None
    """
    configure_logging()
    logger.info("service_started", project=settings.PROJECT_NAME)
    yield


# 创建FastAPI应用实例
app = FastAPI(
    title=settings.PROJECT_NAME,
    description="κ-μ阴影衰落干扰受限链路的中断概率、速率与频率复用评估API",
    version="1.0.0",
    lifespan=lifespan
)

# 配置CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _error_body(exc: NumericalError) -> dict:
    return {"detail": str(exc), "operation": exc.operation}


@app.exception_handler(NumericalError)
async def numerical_error_handler(request: Request, exc: NumericalError) -> JSONResponse:
    """数值计算失败：400"""
    logger.warning("numerical_error", path=request.url.path, operation=exc.operation, detail=exc.detail)
    return JSONResponse(status_code=400, content=_error_body(exc))


@app.exception_handler(InvalidParameter)
@app.exception_handler(DimensionMismatch)
async def invalid_parameter_handler(request: Request, exc: NumericalError) -> JSONResponse:
    """参数非法或维度不匹配：422"""
    logger.info("invalid_parameter", path=request.url.path, operation=exc.operation, detail=exc.detail)
    return JSONResponse(status_code=422, content=_error_body(exc))


# 注册路由
app.include_router(outage.router, prefix="/api/outage", tags=["outage"])
app.include_router(rate.router, prefix="/api/rate", tags=["rate"])
app.include_router(reuse.router, prefix="/api/reuse", tags=["reuse"])


@app.get("/")
async def root():
    """
    根路由

    Returns:
        dict: 欢迎信息
    """
    return {
        "message": f"欢迎使用{settings.PROJECT_NAME}",
        "version": "1.0.0",
        "docs": "/docs"
    }


@app.get("/health")
async def health_check():
    """
    健康检查接口

    Returns:
        dict: 健康状态信息
    """
    return {"status": "healthy", "service": settings.PROJECT_NAME}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "app.main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.DEBUG
    )
