"""
模块名称：oracles.py
主要功能：基于mpmath的高精度校验函数
"""

import mpmath

mpmath.mp.dps = 30


def fd_quad(a, b, c, x) -> float:
    """F_D的积分表示（mpmath求积），要求 a > 0，c − a > 0"""
    def integrand(u):
        value = u ** (a - 1) * (1 - u) ** (c - a - 1)
        for bi, xi in zip(b, x):
            value *= (1 - u * xi) ** (-bi)
        return value

    scale = mpmath.gamma(c) / (mpmath.gamma(a) * mpmath.gamma(c - a))
    return float(scale * mpmath.quad(integrand, [0, 0.5, 1]))


def appell_f1(a, b1, b2, c, x, y) -> float:
    """两变量F_D，即Appell F1"""
    return float(mpmath.appellf1(a, b1, b2, c, x, y))


def hyp1f1(a, b, x) -> float:
    return float(mpmath.hyp1f1(a, b, x))


def hyp2f1(a, b, c, x) -> float:
    return float(mpmath.hyp2f1(a, b, c, x))


def hyp3f2(a1, a2, a3, b1, b2, x) -> float:
    return float(mpmath.hyp3f2(a1, a2, a3, b1, b2, x))


def rising(a, k) -> float:
    return float(mpmath.rf(a, k))
