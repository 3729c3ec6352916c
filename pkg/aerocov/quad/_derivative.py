from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np
from scipy.special import comb

MAX_ORDER = 4
_SHRINK = 2.0
_SAFE = 2.0


def _central(f: Callable[[float], float], s0: float, n: int, h: float) -> float:
    # n-th central difference on the half-integer stencil s0 + (n/2 - k)·h
    k = np.arange(n + 1)
    coeffs = (-1.0) ** k * comb(n, k)
    values = np.array([f(s0 + (n / 2 - i) * h) for i in k])
    return float(np.dot(coeffs, values)) / h**n


def nth_derivative(
    f: Callable[[float], float],
    s0: float,
    n: int,
    h0: Optional[float] = None,
    levels: int = 10,
) -> float:
    """n-th derivative of ``f`` at ``s0`` by Ridders' extrapolation.

    Central differences on a sequence of halving steps are combined in a
    Neville tableau (the stencil is symmetric, so the error is even in the
    step). The entry with the smallest error estimate is returned, and the
    refinement stops once the tableau diagonal starts to diverge. The default
    initial step ``max(|s0|, 1)/(2n)`` keeps the stencil within
    ``max(|s0|, 1)/4`` of ``s0``.

    Raises
    ------
    ValueError
        For negative orders, or orders above 4, where cancellation makes the
        estimate unreliable; use the approximate coverage method instead.
    """
    if n < 0:
        raise ValueError(f"derivative order must be nonnegative, got {n}")
    if n > MAX_ORDER:
        raise ValueError(
            f"derivative order {n} exceeds {MAX_ORDER}; use method='approx' for "
            "large Nakagami shapes"
        )
    if n == 0:
        return float(f(s0))
    h = h0 if h0 is not None else max(abs(s0), 1.0) / (2 * n)
    table = [[_central(f, s0, n, h)]]
    best, err = table[0][0], math.inf
    for i in range(1, levels):
        h /= _SHRINK
        row = [_central(f, s0, n, h)]
        factor = _SHRINK**2
        for j in range(1, i + 1):
            row.append((factor * row[j - 1] - table[i - 1][j - 1]) / (factor - 1))
            factor *= _SHRINK**2
            change = max(
                abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1])
            )
            if change <= err:
                best, err = row[j], change
        table.append(row)
        if abs(row[i] - table[i - 1][i - 1]) >= _SAFE * err:
            break
    return float(best)
