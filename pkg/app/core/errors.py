"""
模块名称：errors.py
主要功能：集中定义数值计算相关的异常与警告类型，以及面向用户的错误消息
"""


class NumericalError(Exception):
    """
    数值计算异常基类

    Attributes:
        operation: 出错的操作名称
        detail: 错误详情
    """

    message = "数值计算失败"

    def __init__(self, operation: str, detail: str = ""):
        self.operation = operation
        self.detail = detail
        super().__init__(f"{operation}: {self.message}" + (f"（{detail}）" if detail else ""))


class NonConvergence(NumericalError):
    """级数或迭代在上限内未收敛"""

    message = "级数在项数上限内未收敛"


class DomainError(NumericalError):
    """参数超出收敛域或表示式有效域"""

    message = "参数超出收敛域"


class QuadratureFailure(NumericalError):
    """数值积分未达到要求精度"""

    message = "数值积分未达到要求精度"


class InvalidParameter(NumericalError, ValueError):
    """输入参数非法"""

    message = "参数非法"


class DimensionMismatch(NumericalError, ValueError):
    """序列长度不一致"""

    message = "维度不匹配"


class LargeMWarning(UserWarning):
    """m过大，建议改用κ-μ极限形式"""
