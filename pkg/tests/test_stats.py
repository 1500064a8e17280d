import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from classcrowd.analysis.stats import (
    kruskal_wallis,
    rank_sum_distribution,
    rank_sum_z,
    wilcoxon_rank_sum,
)


def naive_midranks(values):
    out = []
    for v in values:
        below = sum(1 for u in values if u < v)
        equal = sum(1 for u in values if u == v)
        out.append(below + (equal + 1) / 2)
    return out


def brute_force_p(a, b):
    """Enumerate every relabelling of the pooled sample."""
    pooled = list(a) + list(b)
    ranks = naive_midranks(pooled)
    m = len(a)
    w = sum(ranks[:m])
    sums = [sum(ranks[i] for i in idx) for idx in itertools.combinations(range(len(pooled)), m)]
    lower = sum(1 for s in sums if s <= w + 1e-9)
    upper = sum(1 for s in sums if s >= w - 1e-9)
    return min(1.0, 2 * min(lower, upper) / len(sums)), w


def test_two_by_two_exact():
    r = wilcoxon_rank_sum([1, 2], [3, 4], "exact")
    assert r.statistic == 3.0
    assert r.p_value == pytest.approx(1 / 3, abs=1e-15)
    assert r.method == "wilcoxon-exact"


def test_distribution_counts_subsets():
    dist = rank_sum_distribution([1, 2, 3, 4], 2)
    # doubled sums of {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}
    assert dist == {6: 1, 8: 1, 10: 2, 12: 1, 14: 1}


def test_exact_matches_brute_force_random_fixtures():
    gen = np.random.default_rng(2024)
    for _ in range(300):
        m = int(gen.integers(1, 8))
        n = int(gen.integers(1, 9 - m))
        a = gen.integers(0, 6, size=m).tolist()
        b = gen.integers(0, 6, size=n).tolist()
        expected, w = brute_force_p(a, b)
        got = wilcoxon_rank_sum(a, b, "exact")
        assert got.statistic == pytest.approx(w)
        assert abs(got.p_value - expected) <= 1e-12


def test_exact_matches_scipy_without_ties():
    gen = np.random.default_rng(5)
    for _ in range(50):
        a = gen.permutation(30)[:7] + 0.5
        b = gen.permutation(30)[:9] + 0.25
        ours = wilcoxon_rank_sum(a, b, "exact")
        ref = sps.mannwhitneyu(a, b, alternative="two-sided", method="exact")
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)
        assert ours.statistic - 7 * 8 / 2 == pytest.approx(ref.statistic)


def test_normal_matches_scipy_with_ties():
    gen = np.random.default_rng(6)
    for _ in range(50):
        a = gen.integers(0, 8, size=15)
        b = gen.integers(0, 8, size=18)
        ours = wilcoxon_rank_sum(a, b, "normal")
        ref = sps.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)
        assert ours.method == "wilcoxon-normal"


def test_normal_close_to_exact_at_twenty():
    gen = np.random.default_rng(20)
    for _ in range(25):
        pooled = gen.permutation(200)[:40].astype(float)
        shift = gen.uniform(0, 60)
        a, b = pooled[:20] + shift, pooled[20:]
        exact = wilcoxon_rank_sum(a, b, "exact").p_value
        normal = wilcoxon_rank_sum(a, b, "normal").p_value
        assert abs(exact - normal) < 0.01


def test_auto_mode_cutoff():
    assert wilcoxon_rank_sum(range(8), range(8, 16)).method == "wilcoxon-exact"
    assert wilcoxon_rank_sum(range(8), range(8, 17)).method == "wilcoxon-normal"


def test_empty_sample():
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([], [1, 2])


def test_all_tied_normal():
    assert wilcoxon_rank_sum([3] * 10, [3] * 10, "normal").p_value == 1.0


samples = st.lists(st.integers(1, 20), min_size=1, max_size=6)


@given(samples, samples)
def test_swap_symmetry(a, b):
    for mode in ("exact", "normal"):
        assert wilcoxon_rank_sum(a, b, mode).p_value == pytest.approx(wilcoxon_rank_sum(b, a, mode).p_value, abs=1e-12)


@given(samples, samples)
def test_monotone_transform_invariance(a, b):
    cube = lambda xs: [x**3 for x in xs]  # noqa: E731
    r1 = wilcoxon_rank_sum(a, b)
    r2 = wilcoxon_rank_sum(cube(a), cube(b))
    assert r1.statistic == r2.statistic and r1.p_value == r2.p_value


class TestKruskalWallis:
    def test_identical_groups(self):
        omnibus, _ = kruskal_wallis([[5, 5, 5], [5, 5, 5], [5, 5, 5]])
        assert omnibus.statistic == 0.0 and omnibus.p_value == 1.0

    def test_two_groups_equal_z_squared(self):
        gen = np.random.default_rng(8)
        for _ in range(100):
            m, n = gen.integers(2, 15, size=2)
            pooled = gen.permutation(1000)[: m + n] / 7.0
            a, b = pooled[:m], pooled[m:]
            h = kruskal_wallis([a, b])[0].statistic
            assert h == pytest.approx(rank_sum_z(a, b) ** 2, abs=1e-9)

    def test_matches_scipy(self):
        gen = np.random.default_rng(9)
        for _ in range(50):
            groups = [gen.integers(0, 10, size=int(gen.integers(3, 12))) for _ in range(4)]
            ours = kruskal_wallis(groups)[0]
            ref = sps.kruskal(*groups)
            assert ours.statistic == pytest.approx(ref.statistic, rel=1e-12)
            assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)

    def test_four_groups_bonferroni(self):
        gen = np.random.default_rng(10)
        groups = [gen.normal(loc, 1, size=6) for loc in (0, 0.5, 2, 3)]
        _, pairwise = kruskal_wallis(groups, bonferroni=True)
        _, raw = kruskal_wallis(groups, bonferroni=False)
        assert len(pairwise) == 6
        for corr, r in zip(pairwise, raw):
            assert corr.corrected and not r.corrected
            assert corr.p_value == min(1.0, 6 * r.p_value)
            assert corr.p_value <= 1.0

    def test_capped_at_one(self):
        _, pairwise = kruskal_wallis([[1, 2], [1, 2], [1, 2], [1, 2]])
        assert all(r.p_value == 1.0 for r in pairwise)

    def test_errors(self):
        with pytest.raises(ValueError):
            kruskal_wallis([[1, 2]])
        with pytest.raises(ValueError):
            kruskal_wallis([[1, 2], []])

    @settings(max_examples=50)
    @given(st.lists(st.lists(st.floats(0.1, 50, allow_nan=False), min_size=1, max_size=6), min_size=2, max_size=4))
    def test_monotone_invariance(self, groups):
        h1 = kruskal_wallis(groups)[0].statistic
        h2 = kruskal_wallis([[math.log(x) for x in g] for g in groups])[0].statistic
        # log may merge nearly equal floats into exact ties; skip those draws
        pooled = [x for g in groups for x in g]
        if len(set(pooled)) == len({math.log(x) for x in pooled}):
            assert h1 == pytest.approx(h2, abs=1e-9)
