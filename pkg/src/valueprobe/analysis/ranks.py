"""Rank statistics: tie-averaged ranks, Spearman, Cronbach's alpha, Wilcoxon."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import AllZeroDifferences, DegenerateInput, TooFewDifferences, ZeroVariance

EXACT_MAX_N = 20


def average_ranks(x) -> np.ndarray:
    """Ascending ranks starting at 1; tied entries share their mean rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=float)
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def rank_profile(profile) -> np.ndarray:
    """Rank 1 goes to the highest score; ties receive average ranks."""
    return average_ranks(-np.asarray(profile, dtype=float))


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    return float(np.dot(a, b) / math.sqrt(np.dot(a, a) * np.dot(b, b)))


def spearman_rho(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("spearman_rho needs two 1-D inputs of equal length")
    ra, rb = average_ranks(a), average_ranks(b)
    if np.ptp(ra) == 0 or np.ptp(rb) == 0:
        raise DegenerateInput("all values tied on one side; rank correlation undefined")
    return max(-1.0, min(1.0, _pearson(ra, rb)))


def cronbach_alpha(item_scores) -> float:
    """Internal consistency of k item series observed over the same N sessions.

    ``item_scores`` has shape (k, N). Uses sample variances throughout; the
    ddof cancels in the ratio.
    """
    x = np.asarray(item_scores, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two item series")
    k, n = x.shape
    if n < 2:
        raise ValueError("need at least two sessions")
    total_var = x.sum(axis=0).var(ddof=1)
    if total_var == 0:
        raise ZeroVariance("variance of summed scores is zero")
    return float(k / (k - 1) * (1.0 - x.var(axis=1, ddof=1).sum() / total_var))


# -- Wilcoxon signed-rank ---------------------------------------------------


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # sum of ranks of positive differences
    z: float
    p: float
    n: int  # non-zero differences
    alternative: str
    method: str  # "exact" or "normal"


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _exact_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """Number of sign assignments giving each doubled positive-rank sum."""
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled_ranks.astype(int):
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(a, b=None, alternative: str = "two-sided", method: str = "auto") -> WilcoxonResult:
    """Paired signed-rank test on ``a - b``.

    Zero differences are dropped and tied magnitudes share average ranks.
    With ``method="auto"`` n <= 20 uses the exact permutation distribution
    and larger n the normal approximation with continuity correction and
    tie-corrected variance. ``z`` is always the normal-approximation score;
    ``alternative="less"`` tests whether ``a`` tends to be smaller.
    """
    if alternative not in ("two-sided", "less", "greater"):
        raise ValueError(f"bad alternative {alternative!r}")
    d = np.asarray(a, dtype=float) - (0.0 if b is None else np.asarray(b, dtype=float))
    d = d[d != 0]
    n = len(d)
    if n == 0:
        raise AllZeroDifferences("all paired differences are zero")
    if n < 6:
        raise TooFewDifferences(f"need at least 6 non-zero differences, got {n}")
    ranks = average_ranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float((tie_counts ** 3 - tie_counts).sum()) / 48.0
    sd = math.sqrt(var)
    diff = w_plus - mean
    if alternative == "two-sided":
        z = (diff - 0.5 * np.sign(diff)) / sd
    elif alternative == "greater":
        z = (diff - 0.5) / sd
    else:
        z = (diff + 0.5) / sd

    if method == "auto":
        method = "exact" if n <= EXACT_MAX_N else "normal"
    if method == "exact":
        doubled = np.rint(2 * ranks)
        counts = _exact_counts(doubled)
        probs = counts / counts.sum()
        w2 = int(round(2 * w_plus))
        p_ge = float(probs[w2:].sum())
        p_le = float(probs[: w2 + 1].sum())
    elif method == "normal":
        p_ge = 1.0 - _normal_cdf((diff - 0.5) / sd)
        p_le = _normal_cdf((diff + 0.5) / sd)
    else:
        raise ValueError(f"bad method {method!r}")

    if alternative == "greater":
        p = p_ge
    elif alternative == "less":
        p = p_le
    else:
        p = 2.0 * _normal_cdf(-abs(z)) if method == "normal" else 2.0 * min(p_ge, p_le)
    return WilcoxonResult(w_plus, float(z), min(1.0, p), n, alternative, method)
