"""Slow, obviously-correct reference implementations used only by tests."""

from __future__ import annotations

import itertools
import math


def ranks_by_counting(x):
    """rank_i = (#less) + (#equal + 1) / 2, ascending, O(n^2)."""
    out = []
    for xi in x:
        less = sum(1 for xj in x if xj < xi)
        equal = sum(1 for xj in x if xj == xi)
        out.append(less + (equal + 1) / 2)
    return out


def pearson_direct(a, b):
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    num = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    da = math.sqrt(sum((x - ma) ** 2 for x in a))
    db = math.sqrt(sum((y - mb) ** 2 for y in b))
    return num / (da * db)


def spearman_direct(a, b):
    return pearson_direct(ranks_by_counting(a), ranks_by_counting(b))


def sample_var(xs):
    n = len(xs)
    m = sum(xs) / n
    return sum((x - m) ** 2 for x in xs) / (n - 1)


def alpha_direct(items):
    """items: list of k lists, each of N observations."""
    k = len(items)
    totals = [sum(col) for col in zip(*items)]
    return k / (k - 1) * (1 - sum(sample_var(it) for it in items) / sample_var(totals))


def wilcoxon_enumerate(d):
    """Exact signed-rank test by visiting all 2^n sign patterns.

    Returns (W+, p_greater, p_less, p_two_sided).
    """
    d = [x for x in d if x != 0]
    mags = [abs(x) for x in d]
    r = ranks_by_counting(mags)
    w_obs = sum(ri for ri, x in zip(r, d) if x > 0)
    ge = le = 0
    total = 0
    for signs in itertools.product((0, 1), repeat=len(d)):
        w = sum(ri for ri, s in zip(r, signs) if s)
        total += 1
        ge += w >= w_obs - 1e-9
        le += w <= w_obs + 1e-9
    p_ge, p_le = ge / total, le / total
    return w_obs, p_ge, p_le, min(1.0, 2 * min(p_ge, p_le))
