"""Entropy of categorical distributions and Kendall rank correlation.

Entropy is reported in bits (base-2 logarithm). The correlation is the
tie-corrected tau-b with a two-sided p-value from the normal approximation to
the null distribution of the concordance statistic, including tie terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UndefinedCorrelationError

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PairedSeries:
    """Paired observations (hyperparameter value, entropy) of equal length >= 2."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1:
            raise InvalidInputError("series must be 1-d")
        if x.size != y.size:
            raise InvalidInputError(f"series lengths differ: {x.size} != {y.size}")
        if x.size < 2:
            raise InvalidInputError("series must contain at least 2 pairs")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInputError("series values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class CorrelationResult:
    tau: float
    p_value: float
    n: int

    def __post_init__(self):
        if not -1.0 <= self.tau <= 1.0:
            raise InvalidInputError(f"tau out of [-1, 1]: {self.tau}")
        if not 0.0 <= self.p_value <= 1.0:
            raise InvalidInputError(f"p-value out of [0, 1]: {self.p_value}")


def shannon_entropy_bits(dist) -> float:
    """Shannon entropy, in bits, of a normalized distribution.

    Accepts a :class:`~filex.core.Distribution` or any array of probabilities
    summing to 1 within 1e-9. Zero entries contribute nothing; the result lies
    in [0, log2(len)].
    """
    probs = np.asarray(getattr(dist, "probs", dist), dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise InvalidInputError("distribution must be a non-empty 1-d array")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
        raise InvalidInputError("probabilities must be finite and non-negative")
    total = float(probs.sum())
    if abs(total - 1.0) > _SUM_TOLERANCE:
        raise InvalidInputError(f"probabilities sum to {total!r}, expected 1 within {_SUM_TOLERANCE}")
    positive = probs[probs > 0.0]
    h = float(-(positive * np.log2(positive)).sum())
    # A probability can sit one ulp above 1 after normalization; clamp the
    # resulting -1e-16-ish entropy (or a degenerate -0.0) to the bound.
    return 0.0 if h <= 0.0 else h


def _count_inversions(values: list[float]) -> int:
    """Number of pairs (i < j) with values[i] > values[j], by merge sort."""
    n = len(values)
    if n < 2:
        return 0
    buf = values
    tmp = [0.0] * n
    count = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if buf[j] < buf[i]:  # strict: equal values are not inversions
                    count += mid - i
                    tmp[k] = buf[j]
                    j += 1
                else:
                    tmp[k] = buf[i]
                    i += 1
                k += 1
            tmp[k:hi] = buf[i:mid] if i < mid else buf[j:hi]
            buf[lo:hi] = tmp[lo:hi]
        width *= 2
    return count


def _tie_group_sizes(sorted_values: np.ndarray) -> list[int]:
    sizes = []
    run = 1
    for i in range(1, sorted_values.size):
        if sorted_values[i] == sorted_values[i - 1]:
            run += 1
        else:
            if run > 1:
                sizes.append(run)
            run = 1
    if run > 1:
        sizes.append(run)
    return sizes


def _joint_tie_sizes(x: np.ndarray, y: np.ndarray) -> list[int]:
    sizes = []
    run = 1
    for i in range(1, x.size):
        if x[i] == x[i - 1] and y[i] == y[i - 1]:
            run += 1
        else:
            if run > 1:
                sizes.append(run)
            run = 1
    if run > 1:
        sizes.append(run)
    return sizes


def kendall_tau(series: PairedSeries) -> CorrelationResult:
    """Tie-corrected Kendall tau-b with a two-sided asymptotic p-value.

    Discordant pairs are counted in O(n log n) by sorting on (x, y) and merge
    counting strict y-inversions; concordant minus discordant then follows from
    the pair-count identity with the x, y, and joint tie totals. The p-value
    uses the normal approximation to the null variance of the concordance
    statistic with tie corrections.
    """
    x, y = series.x, series.y
    n = len(series)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("correlation undefined: a series is constant")

    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]

    n0 = n * (n - 1) // 2
    xtie = sum(t * (t - 1) // 2 for t in _tie_group_sizes(xs))
    ytie = sum(t * (t - 1) // 2 for t in _tie_group_sizes(np.sort(y)))
    ntie = sum(t * (t - 1) // 2 for t in _joint_tie_sizes(xs, ys))
    dis = _count_inversions(ys.tolist())

    con_minus_dis = n0 - xtie - ytie + ntie - 2 * dis
    tau = con_minus_dis / math.sqrt((n0 - xtie) * (n0 - ytie))
    tau = max(-1.0, min(1.0, tau))

    p_value = _asymptotic_p(n, xs, np.sort(y), con_minus_dis)
    return CorrelationResult(tau, p_value, n)


def _asymptotic_p(n: int, x_sorted: np.ndarray, y_sorted: np.ndarray, con_minus_dis: int) -> float:
    tx = _tie_group_sizes(x_sorted)
    ty = _tie_group_sizes(y_sorted)
    v0 = n * (n - 1) * (2 * n + 5)
    vt = sum(t * (t - 1) * (2 * t + 5) for t in tx)
    vu = sum(u * (u - 1) * (2 * u + 5) for u in ty)
    v1 = (
        sum(t * (t - 1) for t in tx) * sum(u * (u - 1) for u in ty)
        / (2.0 * n * (n - 1))
    )
    v2 = 0.0
    if n > 2:
        v2 = (
            sum(t * (t - 1) * (t - 2) for t in tx) * sum(u * (u - 1) * (u - 2) for u in ty)
            / (9.0 * n * (n - 1) * (n - 2))
        )
    var = (v0 - vt - vu) / 18.0 + v1 + v2
    if var <= 0.0:
        raise UndefinedCorrelationError("correlation undefined: null variance is zero")
    z = con_minus_dis / math.sqrt(var)
    return math.erfc(abs(z) / math.sqrt(2.0))
