"""Correlations and the paired one-sided Wilcoxon signed-rank test.

The Wilcoxon p-value is exact (full distribution over sign assignments,
tie-aware) up to 25 effective pairs and a tie- and continuity-corrected
normal approximation beyond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateResultError, ParameterError

EXACT_LIMIT = 25


def average_ranks(values) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.float64)
    s = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and s[j + 1] == s[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def pearson(x, y) -> float:
    """Product-moment correlation; raises on zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("x and y must be 1-d of equal length")
    if x.size < 2:
        raise ParameterError("need at least two points")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        raise DegenerateResultError("correlation undefined: zero variance input")
    return float(xc @ yc) / denom


def spearman(x, y) -> float:
    """Rank correlation: Pearson of average-ranked data."""
    return pearson(average_ranks(x), average_ranks(y))


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    w_plus: float
    p_one_sided: float
    method: str  # 'exact' | 'normal-approximation'
    degenerate: bool = False


def wilcoxon_one_sided(x, y, alternative: str = "x_greater") -> WilcoxonResult:
    """Paired one-sided Wilcoxon signed-rank test of x > y.

    Zero differences are discarded (the test's original treatment), |d| is
    ranked with average ranks on ties, and W+ sums the ranks of positive
    differences. With all differences zero the result is degenerate (p = 1,
    flagged). Exact p-values enumerate the full sign-assignment distribution
    for up to 25 effective pairs.
    """
    if alternative != "x_greater":
        raise ParameterError(f"unsupported alternative {alternative!r}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 1:
        raise ParameterError("x and y must be 1-d, equal length, nonempty")
    d = x - y
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        return WilcoxonResult(
            n_effective=0, w_plus=0.0, p_one_sided=1.0, method="exact", degenerate=True
        )
    ranks = average_ranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    if n <= EXACT_LIMIT:
        p = _exact_p_upper(ranks, w_plus, n)
        return WilcoxonResult(n_effective=n, w_plus=w_plus, p_one_sided=p, method="exact")
    p = _normal_p_upper(np.abs(d), ranks, w_plus, n)
    return WilcoxonResult(
        n_effective=n, w_plus=w_plus, p_one_sided=p, method="normal-approximation"
    )


def _exact_p_upper(ranks: np.ndarray, w_plus: float, n: int) -> float:
    """P(W+ >= observed) over all 2^n sign assignments.

    Works on doubled ranks, which are integers even under average-rank ties,
    so the distribution is an exact integer convolution (counts stay far
    below 2^53 for n <= 25).
    """
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r2 in doubled:
        shifted = np.zeros_like(counts)
        shifted[r2:] = counts[: total + 1 - r2]
        counts += shifted
    observed = int(round(2.0 * w_plus))
    return float(counts[observed:].sum()) / float(2**n)


def _normal_p_upper(abs_d: np.ndarray, ranks: np.ndarray, w_plus: float, n: int) -> float:
    """Upper-tail normal approximation with tie and continuity corrections."""
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_sizes = np.unique(abs_d, return_counts=True)
    var -= float(((tie_sizes**3 - tie_sizes)).sum()) / 48.0
    z = (w_plus - 0.5 - mean) / math.sqrt(var)
    return 0.5 * math.erfc(z / math.sqrt(2.0))
