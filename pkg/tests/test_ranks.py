import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import stats

from oracles import alpha_direct, ranks_by_counting, spearman_direct, wilcoxon_enumerate
from valueprobe.analysis import (
    average_ranks,
    cronbach_alpha,
    rank_profile,
    spearman_rho,
    wilcoxon_signed_rank,
)
from valueprobe.errors import AllZeroDifferences, DegenerateInput, TooFewDifferences, ZeroVariance

small_ints = st.lists(st.integers(-5, 5), min_size=3, max_size=30)


@given(small_ints)
def test_average_ranks_match_counting(x):
    assert average_ranks(x).tolist() == ranks_by_counting(x)


def test_rank_profile_descending_with_ties():
    assert rank_profile([0.5, 0.9, 0.5, -1.0]).tolist() == [2.5, 1.0, 2.5, 4.0]


@given(st.data())
@settings(max_examples=100)
def test_spearman_matches_oracle_and_is_bounded(data):
    n = data.draw(st.integers(3, 25))
    a = data.draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    assume(len(set(a)) > 1 and len(set(b)) > 1)
    rho = spearman_rho(a, b)
    assert -1.0 <= rho <= 1.0
    assert rho == pytest.approx(spearman_direct(a, b), abs=1e-9)
    assert rho == pytest.approx(spearman_rho(b, a), abs=1e-12)


@given(st.lists(st.integers(-1000, 1000), min_size=3, max_size=20, unique=True), st.randoms())
def test_spearman_invariant_under_monotone_maps(a, rnd):
    b = a[:]
    rnd.shuffle(b)
    cubed = [x ** 3 + 7 * x for x in a]
    assert spearman_rho(a, b) == pytest.approx(spearman_rho(cubed, b), abs=1e-12)
    assert spearman_rho(a, a) == pytest.approx(1.0, abs=1e-12)
    assert spearman_rho(a, [-x for x in a]) == pytest.approx(-1.0, abs=1e-12)


def test_spearman_agrees_with_scipy():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = rng.integers(0, 5, 15), rng.integers(0, 5, 15)
        assert spearman_rho(a, b) == pytest.approx(stats.spearmanr(a, b).statistic, abs=1e-12)


def test_spearman_degenerate():
    with pytest.raises(DegenerateInput):
        spearman_rho([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman_rho([1, 2], [1, 2, 3])


@given(st.data())
@settings(max_examples=100)
def test_alpha_matches_direct_formula(data):
    k = data.draw(st.integers(2, 5))
    n = data.draw(st.integers(3, 20))
    items = [data.draw(st.lists(st.integers(1, 6), min_size=n, max_size=n)) for _ in range(k)]
    totals = [sum(c) for c in zip(*items)]
    assume(len(set(totals)) > 1)
    a = cronbach_alpha(items)
    assert a == pytest.approx(alpha_direct(items), abs=1e-9)
    assert a <= 1.0 + 1e-12


def test_alpha_identical_items_is_one():
    x = [1, 3, 2, 6, 5]
    assert cronbach_alpha([x, x, x]) == pytest.approx(1.0)


def test_alpha_zero_variance():
    with pytest.raises(ZeroVariance):
        cronbach_alpha([[2, 2, 2], [3, 3, 3]])


@given(st.lists(st.integers(-4, 4).filter(bool), min_size=6, max_size=12))
@settings(max_examples=100, deadline=None)
def test_wilcoxon_exact_matches_enumeration(d):
    w, p_ge, p_le, p_two = wilcoxon_enumerate(d)
    for alt, ref in (("two-sided", p_two), ("greater", p_ge), ("less", p_le)):
        r = wilcoxon_signed_rank(d, alternative=alt)
        assert r.method == "exact" and r.statistic == pytest.approx(w)
        assert r.p == pytest.approx(ref, abs=1e-9)


def test_wilcoxon_exact_agrees_with_scipy_without_ties():
    rng = np.random.default_rng(1)
    for _ in range(30):
        d = rng.permutation(np.arange(1, 16)) * rng.choice([-1, 1], 15)
        ours = wilcoxon_signed_rank(d, method="exact").p
        ref = stats.wilcoxon(d, method="exact").pvalue
        assert ours == pytest.approx(ref, abs=1e-12)


def test_wilcoxon_normal_agrees_with_scipy():
    rng = np.random.default_rng(2)
    for _ in range(30):
        d = rng.integers(-6, 7, 40).astype(float)
        d[d == 0] = 2.0
        for alt in ("two-sided", "less", "greater"):
            ours = wilcoxon_signed_rank(d, alternative=alt, method="normal").p
            ref = stats.wilcoxon(d, alternative=alt, correction=True, method="approx").pvalue
            assert ours == pytest.approx(ref, rel=1e-9)


def test_wilcoxon_paired_and_one_sided_direction():
    a = np.array([0.1, 0.2, 0.15, 0.3, 0.05, 0.12, 0.22, 0.18])
    b = a + np.array([0.3, 0.5, 0.2, 0.4, 0.6, 0.1, 0.35, 0.45])
    r = wilcoxon_signed_rank(a, b, alternative="less")
    assert r.statistic == 0.0 and r.p == pytest.approx(1 / 256)
    assert wilcoxon_signed_rank(a, b, alternative="greater").p == pytest.approx(1.0)
    assert r.z < 0


def test_wilcoxon_edge_cases():
    with pytest.raises(AllZeroDifferences):
        wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])
    with pytest.raises(TooFewDifferences):
        wilcoxon_signed_rank([1, -2, 3, 0, 0])
    with pytest.raises(ValueError):
        wilcoxon_signed_rank([1] * 8, alternative="both")
