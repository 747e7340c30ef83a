"""Independent reference computations used to freeze expected values.

None of these touch the library's quadrature paths.
"""

import math
from fractions import Fraction

import numpy as np


def cantor_recursive(x, depth):
    """Cantor function straight from its functional equations."""
    if depth == 0:
        return 0.0
    if x <= 1 / 3:
        return 0.5 * cantor_recursive(3 * x, depth - 1)
    if x < 2 / 3:
        return 0.5
    return 0.5 + 0.5 * cantor_recursive(3 * x - 2, depth - 1)


def cover_midpoints(level):
    """Midpoints of the 2**level intervals covering the level-k Cantor set."""
    left = np.zeros(1)
    for j in range(1, level + 1):
        left = np.concatenate([left, left + 2 * 3.0**-j])
    return left + 0.5 * 3.0**-level


def cantor_riemann_stieltjes(f, level):
    """Riemann-Stieltjes sum of f(x) d phi(x) with one tag per cover interval."""
    x = cover_midpoints(level)
    return math.fsum(f(x)) / 2**level


def naive_poisson(r, theta):
    return (1 - r * r) / (1 - 2 * r * np.cos(theta) + r * r)


def cantor_second_moment():
    # m2 = (1/2) E[(x/3)^2] + (1/2) E[((x+2)/3)^2] = m2/18 + (m2 + 4 m1 + 4)/18
    m1 = Fraction(1, 2)
    return ((4 * m1 + 4) / 18) / (1 - Fraction(2, 18))


def parseval_m2(r, terms=20000):
    """sqrt(sum_k r^{2|k|}) summed term by term."""
    k = np.arange(1, terms)
    return math.sqrt(1 + 2 * math.fsum(r ** (2 * k)))


# Frozen before the implementation existed:
# (1/2pi) sum over the level-18 Cantor cover of P_{1/2}(pi - 2 pi x), see
# cantor_riemann_stieltjes; levels 14/16/18 agree to 5e-14 / 1.4e-16.
CANTOR_U_HALF_PI = 0.08572984831749025
