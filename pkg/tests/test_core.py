"""
模块名称：test_core.py
主要功能：全局配置、异常类型与日志工具测试
"""

import pytest
from pydantic import ValidationError

from app.core.config import Settings, settings
from app.core.errors import DimensionMismatch, InvalidParameter, NonConvergence, NumericalError
from app.core.logging import configure_logging, get_logger
from app.schemas.series import SeriesConfig


def test_defaults():
    assert settings.DEFAULT_TRUNCATION_P == 50
    assert settings.MC_CONFIDENCE in (0.95, 0.99)
    assert SeriesConfig.from_settings().max_index_per_dim == settings.SERIES_MAX_INDEX_PER_DIM


def test_settings_validation():
    with pytest.raises(ValidationError):
        Settings(MC_CONFIDENCE=0.9)
    with pytest.raises(ValidationError):
        Settings(SERIES_REL_TOL=0.0)
    assert Settings(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"
    assert Settings(CORS_ORIGINS="http://a, http://b").CORS_ORIGINS == ["http://a", "http://b"]


def test_error_message_names_operation():
    error = NonConvergence("ed_function", "外层指标超过200")
    assert isinstance(error, NumericalError)
    assert str(error).startswith("ed_function: ")
    assert error.operation == "ed_function"
    assert "外层指标超过200" in str(error)


def test_parameter_errors_are_value_errors():
    assert issubclass(InvalidParameter, ValueError)
    assert issubclass(DimensionMismatch, ValueError)


def test_logger_binds_module(capsys):
    configure_logging("INFO", json_output=True)
    get_logger("tests.core").info("logger_ready", value=1)
    err = capsys.readouterr().err
    assert '"module": "tests.core"' in err
    assert '"event": "logger_ready"' in err
    configure_logging()
