"""
模块名称：logging.py
主要功能：结构化日志配置，统一使用structlog输出
"""

import logging
import sys

import structlog

from app.core.config import settings

_configured = False


def configure_logging(level: str = None, json_output: bool = None) -> None:
    """
    配置structlog

    Args:
        level: 日志级别，默认取配置中的LOG_LEVEL
        json_output: 是否输出JSON，默认取配置中的LOG_JSON
    """
    global _configured
    level = (level or settings.LOG_LEVEL).upper()
    json_output = settings.LOG_JSON if json_output is None else json_output

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level)

    renderer = (
        structlog.processors.JSONRenderer()
        if json_output
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            getattr(logging, level)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str = None) -> structlog.stdlib.BoundLogger:
    """
    获取结构化日志记录器

    Args:
        name: 记录器名称，一般传入模块名

    Returns:
        BoundLogger: 绑定了模块名的日志记录器
    """
    if not _configured:
        configure_logging()
    return structlog.get_logger().bind(module=name)
