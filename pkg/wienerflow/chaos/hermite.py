"""Normalized probabilists' Hermite polynomials.

Normalization: E[H_n(X) H_m(X)] = delta_{nm} for X ~ N(0, 1) and
H_n' = sqrt(n) H_{n-1}. The matching three-term recurrence is

    H_0 = 1,  H_1 = x,  H_{n+1} = (x H_n - sqrt(n) H_{n-1}) / sqrt(n + 1).

Products linearize as H_m H_n = sum_k L(m, n, k) H_k with

    L(m, n, k) = sqrt(m! n! k!) / ((s-m)! (s-n)! (s-k)!),  s = (m+n+k)/2,

nonzero only when m+n+k is even and s >= max(m, n, k).
"""

import math
from functools import lru_cache

import numpy as np


def hermite_table(x: np.ndarray, cap: int) -> np.ndarray:
    """Evaluate H_0..H_cap at every entry of ``x``.

    Returns an array of shape ``x.shape + (cap + 1,)``.
    """
    x = np.asarray(x, dtype=float)
    table = np.empty(x.shape + (cap + 1,))
    table[..., 0] = 1.0
    if cap >= 1:
        table[..., 1] = x
    for n in range(1, cap):
        table[..., n + 1] = (x * table[..., n] - math.sqrt(n) * table[..., n - 1]) / math.sqrt(n + 1)
    return table


def hermite_value(n: int, x: float) -> float:
    """Single H_n(x) via the recurrence."""
    return float(hermite_table(np.asarray(x), n)[..., n])


@lru_cache(maxsize=None)
def linearization_coefficient(m: int, n: int, k: int) -> float:
    """E[H_m H_n H_k], computed with exact integers and converted once."""
    total = m + n + k
    if total % 2:
        return 0.0
    s = total // 2
    if s < max(m, n, k):
        return 0.0
    numerator = math.factorial(m) * math.factorial(n) * math.factorial(k)
    denominator = (
        math.factorial(s - m) * math.factorial(s - n) * math.factorial(s - k)
    ) ** 2
    # int / int is correctly rounded, so only the final sqrt rounds again
    return math.sqrt(numerator / denominator)


@lru_cache(maxsize=None)
def linearization_table(cap: int) -> dict[tuple[int, int], tuple[tuple[int, float], ...]]:
    """For every m, n <= cap: the (k, L(m, n, k)) pairs of H_m H_n, k ascending.

    Entries with k > cap are kept; the caller applies the truncation policy.
    """
    table = {}
    for m in range(cap + 1):
        for n in range(cap + 1):
            table[(m, n)] = tuple(
                (k, linearization_coefficient(m, n, k))
                for k in range(abs(m - n), m + n + 1, 2)
            )
    return table


def gauss_hermite_rule(points: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for E[f(X)], X ~ N(0, 1).

    Uses the physicists' rule from numpy with the change of variables
    x = sqrt(2) t and weights normalized by sqrt(pi).
    """
    nodes, weights = np.polynomial.hermite.hermgauss(points)
    return math.sqrt(2.0) * nodes, weights / math.sqrt(math.pi)


def gaussian_expectation(fn, points: int = 80) -> float:
    """E[fn(X)] for X ~ N(0, 1) by Gauss-Hermite quadrature."""
    nodes, weights = gauss_hermite_rule(points)
    return float(np.sum(weights * fn(nodes)))


def validate_linearization(cap: int, points: int | None = None) -> float:
    """Max deviation between the linearization table and quadrature projections.

    For every m, n <= cap and every k <= m + n, compares L(m, n, k) with
    E[H_m H_n H_k] computed by Gauss-Hermite quadrature, which is exact for
    polynomials of degree <= 2 * points - 1.
    """
    points = points or (2 * cap + 2)
    nodes, weights = gauss_hermite_rule(points)
    table = hermite_table(nodes, 2 * cap)
    worst = 0.0
    for m in range(cap + 1):
        for n in range(cap + 1):
            for k in range(m + n + 1):
                quadrature = float(np.sum(weights * table[:, m] * table[:, n] * table[:, k]))
                worst = max(worst, abs(quadrature - linearization_coefficient(m, n, k)))
    return worst
