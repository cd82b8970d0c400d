"""Binomial coefficients with the zero convention C(m, n) = 0 for n < 0 or n > m."""

import math

import numpy as np

EXACT_LIMIT = 60


def binom(m: int, n: int) -> float:
    if n < 0 or n > m or m < 0:
        return 0.0
    if m <= EXACT_LIMIT:
        return float(math.comb(m, n))
    return math.exp(log_binom(m, n))


def log_binom(m: int, n: int) -> float:
    """Natural log of C(m, n); ``-inf`` where the coefficient vanishes."""
    if n < 0 or n > m or m < 0:
        return -math.inf
    if m <= EXACT_LIMIT:
        return math.log(math.comb(m, n))
    return math.lgamma(m + 1) - math.lgamma(n + 1) - math.lgamma(m - n + 1)


def binom_row(m: int) -> np.ndarray:
    """All C(m, j) for j = 0..m as floats."""
    return np.array([binom(m, j) for j in range(m + 1)])
