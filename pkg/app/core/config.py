"""
模块名称：config.py
主要功能：应用配置管理，使用Pydantic的BaseSettings集中管理服务、级数、仿真相关参数
"""

from typing import List
from pydantic_settings import BaseSettings
from pydantic import field_validator
import json
import os


class Settings(BaseSettings):
    """
    应用配置类

    Attributes:
        PROJECT_NAME: 项目名称
        DEBUG: 调试模式开关
        HOST: 服务器主机地址
        PORT: 服务器端口
        CORS_ORIGINS: 允许的CORS源列表
        LOG_LEVEL: 日志级别
        LOG_JSON: 是否输出JSON格式日志
        SERIES_ABS_TOL: 级数绝对容差
        SERIES_REL_TOL: 级数相对容差
        SERIES_MAX_TOTAL_TERMS: 级数总项数上限
        SERIES_MAX_INDEX_PER_DIM: 单维度指标上限
        SERIES_MAX_SHELLS: 按总次数求和时的壳层数上限
        DEFAULT_TRUNCATION_P: 默认截断项数P
        AUTO_P_EPSILON: 自动选择P时的误差界目标
        AUTO_P_MAX: 自动选择P的上限
        INTERFERER_M_CAP: 干扰信道m参数上限
        LARGE_M_WARNING: m超过该值时发出警告
        QUAD_TOL: 数值积分容差
        MC_BATCH_SIZE: 蒙特卡洛每批样本数
        MC_CONFIDENCE: 置信水平
        WORKER_THREADS: 工作线程数
    """

    # 应用配置
    PROJECT_NAME: str = os.getenv("PROJECT_NAME", "KMS-SIR Toolkit")
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", 8000))

    # CORS配置
    CORS_ORIGINS: List[str] = os.getenv('CORS_ORIGINS', [
        "http://localhost:5173",
        "http://localhost:3000",
    ])

    # 日志配置
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = os.getenv("LOG_JSON", "False").lower() == "true"

    # 级数配置
    SERIES_ABS_TOL: float = 1e-12
    SERIES_REL_TOL: float = 1e-10
    SERIES_MAX_TOTAL_TERMS: int = 10_000_000
    SERIES_MAX_INDEX_PER_DIM: int = 200
    SERIES_MAX_SHELLS: int = 250_000

    # 分析配置
    DEFAULT_TRUNCATION_P: int = 50
    AUTO_P_EPSILON: float = 1e-6
    AUTO_P_MAX: int = 2000
    INTERFERER_M_CAP: float = 1e6
    LARGE_M_WARNING: float = 1e4
    QUAD_TOL: float = 1e-10

    # 仿真配置
    MC_BATCH_SIZE: int = 100
    MC_CONFIDENCE: float = 0.95
    WORKER_THREADS: int = int(os.getenv("WORKER_THREADS", 1))

    class Config:
        """配置类设置"""
        env_file = ".env"
        case_sensitive = True

    @field_validator("CORS_ORIGINS", mode='before')
    def parse_cors_origins(cls, v):
        """
        解析CORS_ORIGINS配置

        Args:
            v: 原始配置值

        Returns:
            List[str]: 解析后的CORS源列表
        """
        if isinstance(v, str):
            try:
                return json.loads(v)
            except json.JSONDecodeError:
                return [item.strip() for item in v.split(",")]
        return v

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v):
        """
        验证日志级别名称

        Args:
            v: 日志级别

        Returns:
            str: 大写的日志级别
        """
        level = v.upper()
        if level not in ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"):
            raise ValueError(f"不支持的日志级别: {v}")
        return level

    @field_validator("SERIES_ABS_TOL", "SERIES_REL_TOL", "AUTO_P_EPSILON", "QUAD_TOL")
    def validate_positive_tolerance(cls, v):
        """容差必须为正数"""
        if v <= 0:
            raise ValueError("容差必须大于0")
        return v

    @field_validator("MC_CONFIDENCE")
    def validate_confidence(cls, v):
        """置信水平只能取0.95或0.99"""
        if v not in (0.95, 0.99):
            raise ValueError("置信水平只能为0.95或0.99")
        return v


# 创建全局配置实例
settings = Settings()
