"""Rank-based tests: Wilcoxon rank-sum and Kruskal-Wallis with Bonferroni."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _st

EXACT_CUTOFF = 16


@dataclass(frozen=True)
class StatResult:
    statistic: float
    p_value: float
    method: str  # "wilcoxon-exact" | "wilcoxon-normal" | "kruskal-wallis"
    corrected: bool = False


def midranks(values: Sequence[float]) -> np.ndarray:
    return _st.rankdata(np.asarray(values, dtype=float), method="average")


def tie_sizes(values: Sequence[float]) -> np.ndarray:
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return counts


def rank_sum_distribution(ranks: Sequence[float], m: int) -> dict[int, int]:
    """Number of m-subsets of ``ranks`` per rank sum, with sums doubled.

    Mid-ranks are multiples of 0.5, so doubling keeps every sum an integer.
    """
    doubled = [int(round(2 * r)) for r in ranks]
    # table[j] maps a doubled rank sum to the count of j-subsets reaching it
    table: list[dict[int, int]] = [dict() for _ in range(m + 1)]
    table[0][0] = 1
    for r in doubled:
        for j in range(min(m, len(doubled)), 0, -1):
            prev = table[j - 1]
            cur = table[j]
            for s, n in prev.items():
                cur[s + r] = cur.get(s + r, 0) + n
    return table[m]


def _exact_p(ranks: np.ndarray, m: int, w: float) -> float:
    dist = rank_sum_distribution(ranks, m)
    target = int(round(2 * w))
    total = sum(dist.values())
    lower = sum(n for s, n in dist.items() if s <= target)
    upper = sum(n for s, n in dist.items() if s >= target)
    return min(1.0, 2 * min(lower, upper) / total)


def _normal_p(pooled: np.ndarray, m: int, n: int, w: float) -> float:
    big_n = m + n
    ties = tie_sizes(pooled)
    mean = m * (big_n + 1) / 2.0
    var = m * n / 12.0 * ((big_n + 1) - np.sum(ties**3 - ties) / (big_n * (big_n - 1)))
    if var <= 0:
        return 1.0
    z = (abs(w - mean) - 0.5) / math.sqrt(var)
    if z <= 0:
        return 1.0
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float], mode: str = "auto") -> StatResult:
    """Two-sided Wilcoxon rank-sum test; the statistic is the rank sum of ``a``.

    ``mode`` is "exact", "normal" or "auto" (exact when the pooled size is at
    most 16). The exact two-sided p doubles the smaller tail, capped at 1.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    if mode not in ("exact", "normal", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    pooled = np.concatenate([a, b])
    ranks = midranks(pooled)
    m, n = a.size, b.size
    w = float(ranks[:m].sum())
    if mode == "auto":
        mode = "exact" if m + n <= EXACT_CUTOFF else "normal"
    if mode == "exact":
        return StatResult(w, _exact_p(ranks, m, w), "wilcoxon-exact")
    return StatResult(w, _normal_p(pooled, m, n, w), "wilcoxon-normal")


def rank_sum_z(a: Sequence[float], b: Sequence[float]) -> float:
    """Standardised rank sum of ``a`` without tie or continuity corrections."""
    m, n = len(a), len(b)
    ranks = midranks(np.concatenate([np.asarray(a, float), np.asarray(b, float)]))
    w = ranks[:m].sum()
    big_n = m + n
    return float((w - m * (big_n + 1) / 2.0) / math.sqrt(m * n * (big_n + 1) / 12.0))


def kruskal_wallis(
    groups: Sequence[Sequence[float]],
    bonferroni: bool = True,
    pairwise_mode: str = "auto",
) -> tuple[StatResult, list[StatResult]]:
    """Tie-corrected Kruskal-Wallis H plus all pairwise rank-sum tests.

    Pairwise results come in ``itertools.combinations`` order. With
    ``bonferroni`` their p-values are multiplied by k(k-1)/2 and capped at 1.
    """
    groups = [np.asarray(g, dtype=float) for g in groups]
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    if any(g.size < 1 for g in groups):
        raise ValueError("every group needs at least one observation")
    pooled = np.concatenate(groups)
    big_n = pooled.size
    ranks = midranks(pooled)
    h = 0.0
    pos = 0
    for g in groups:
        r = ranks[pos:pos + g.size]
        h += r.sum() ** 2 / g.size
        pos += g.size
    h = 12.0 / (big_n * (big_n + 1)) * h - 3.0 * (big_n + 1)
    ties = tie_sizes(pooled)
    correction = 1.0 - np.sum(ties**3 - ties) / (big_n**3 - big_n) if big_n > 1 else 0.0
    if correction <= 0:
        h, p = 0.0, 1.0
    else:
        h = max(0.0, h / correction)
        p = float(_st.chi2.sf(h, len(groups) - 1))
    omnibus = StatResult(float(h), min(1.0, p), "kruskal-wallis")

    pairs = list(itertools.combinations(range(len(groups)), 2))
    pairwise = []
    for i, j in pairs:
        r = wilcoxon_rank_sum(groups[i], groups[j], pairwise_mode)
        if bonferroni:
            r = StatResult(r.statistic, min(1.0, r.p_value * len(pairs)), r.method, True)
        pairwise.append(r)
    return omnibus, pairwise
