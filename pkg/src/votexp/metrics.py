"""Profile statistics used in the experiments."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy import stats

from .core import PartialRankMatrix
from .scoring import ScoringVector, scores


def pairwise_counts(full: PartialRankMatrix) -> np.ndarray:
    """``N[a, b]``: number of voters ranking ``a`` above ``b``."""
    if not full.is_complete:
        raise ValueError("pairwise counts need a complete profile")
    m = full.m
    counts = np.zeros((m, m), dtype=np.int64)
    for row in full.cells:
        for k, a in enumerate(row):
            for b in row[k + 1 :]:
                counts[a, b] += 1
    return counts


def agreement_index(full: PartialRankMatrix) -> Fraction:
    """Mean absolute pairwise majority margin, normalised to ``[0, 1]``.

    Each unordered pair of candidates is counted once.
    """
    n, m = full.n, full.m
    if m < 2:
        return Fraction(1)
    counts = pairwise_counts(full)
    total = sum(abs(int(counts[a, b] - counts[b, a])) for a, b in combinations(range(m), 2))
    return Fraction(total, n * m * (m - 1) // 2)


def margin_of_victory(full: PartialRankMatrix, rule: ScoringVector) -> int:
    """Winner's score minus the runner-up's (0 when the top is tied)."""
    if not full.is_complete:
        raise ValueError("margin of victory needs a complete profile")
    s = sorted(scores(full, rule), reverse=True)
    return int(s[0] - s[1]) if len(s) > 1 else 0


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    if len(xs) != len(ys):
        raise ValueError("spearman needs sequences of equal length")
    if len(xs) < 2:
        raise ValueError("spearman needs at least two observations")
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        raise ValueError("spearman is undefined for a constant sequence")
    return float(stats.spearmanr(xs, ys).statistic)
