"""Shared deterministic generators and statistics helpers for the suite."""

from __future__ import annotations

from fractions import Fraction
from random import Random

import pytest


def rational(rng: Random, span: int = 3, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def positive_rational(rng: Random, span: int = 4, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(1, span), rng.randint(1, max_den))


def rational_vector(rng: Random, size: int, span: int = 3, max_den: int = 4) -> list[Fraction]:
    return [rational(rng, span, max_den) for _ in range(size)]


def rational_matrix(rng: Random, rows: int, cols: int, span: int = 2, max_den: int = 3):
    return tuple(tuple(rational(rng, span, max_den) for _ in range(cols)) for _ in range(rows))


def rational_diag_spd(rng: Random, p: int):
    return tuple(
        tuple(positive_rational(rng) if r == c else Fraction(0) for c in range(p))
        for r in range(p)
    )


def rational_full_spd(rng: Random, p: int):
    """L^T L + I with small rational L: symmetric positive definite, exact."""
    low = rational_matrix(rng, p, p, span=2, max_den=2)
    out = [[Fraction(0)] * p for _ in range(p)]
    for r in range(p):
        for c in range(p):
            out[r][c] = sum(low[k][r] * low[k][c] for k in range(p))
        out[r][r] += 1
    return tuple(tuple(row) for row in out)


def rect_diag_matrix(values, rows: int, cols: int):
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for idx, v in enumerate(values):
        out[idx][idx] = v
    return tuple(tuple(row) for row in out)


def float_matrix(rng: Random, rows: int, cols: int, span: float = 2.0):
    return tuple(
        tuple(rng.uniform(-span, span) for _ in range(cols)) for _ in range(rows)
    )


def float_spd(rng: Random, p: int):
    low = [[rng.uniform(-1.0, 1.0) for _ in range(p)] for _ in range(p)]
    out = [[0.0] * p for _ in range(p)]
    for r in range(p):
        for c in range(p):
            out[r][c] = sum(low[k][r] * low[k][c] for k in range(p))
        out[r][r] += 1.0
    return tuple(tuple(row) for row in out)


# -- k-statistics (unbiased cumulant estimators) --------------------------------


def k_statistics(values, order: int) -> float:
    """Classical k-statistic of the given order (1..4) from a sample."""
    import numpy as np

    x = np.asarray(values, dtype=float)
    n = len(x)
    s1 = float(np.sum(x))
    s2 = float(np.sum(x**2))
    s3 = float(np.sum(x**3))
    s4 = float(np.sum(x**4))
    if order == 1:
        return s1 / n
    if order == 2:
        return (n * s2 - s1**2) / (n * (n - 1))
    if order == 3:
        return (2 * s1**3 - 3 * n * s1 * s2 + n**2 * s3) / (n * (n - 1) * (n - 2))
    if order == 4:
        num = (
            -6 * s1**4
            + 12 * n * s1**2 * s2
            - 3 * n * (n - 1) * s2**2
            - 4 * n * (n + 1) * s1 * s3
            + n**2 * (n + 1) * s4
        )
        return num / (n * (n - 1) * (n - 2) * (n - 3))
    raise ValueError("k-statistics implemented for orders 1..4")


@pytest.fixture
def rng() -> Random:
    return Random(0xC0FFEE)
