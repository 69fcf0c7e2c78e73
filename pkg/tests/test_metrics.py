from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from votexp.core import make_matrix
from votexp.metrics import agreement_index, margin_of_victory, pairwise_counts, spearman
from votexp.scoring import ScoringVector


def test_pairwise_counts(example1):
    counts = pairwise_counts(example1)
    assert counts[0, 1] == 3 and counts[1, 0] == 1
    assert (counts + counts.T + 4 * np.eye(4, dtype=int) == 4).all()


def test_agreement_extremes():
    assert agreement_index(make_matrix([[0, 1, 2, 3]] * 6)) == 1
    assert agreement_index(make_matrix([[0, 1, 2, 3]] * 3 + [[3, 2, 1, 0]] * 3)) == 0
    assert agreement_index(make_matrix([[0]])) == 1


def test_agreement_example(example1):
    # pair margins |N(a,b) - N(b,a)|: AB 2, every other pair 0
    assert agreement_index(example1) == Fraction(2, 24)


def test_margin_of_victory(example1):
    assert margin_of_victory(example1, ScoringVector.borda(4)) == 1
    tied = make_matrix([[0, 1], [1, 0]])
    assert margin_of_victory(tied, ScoringVector.borda(2)) == 0


def test_incomplete_profiles_rejected(x1):
    with pytest.raises(ValueError):
        pairwise_counts(x1)
    with pytest.raises(ValueError):
        margin_of_victory(x1, ScoringVector.borda(4))


def average_ranks(xs):
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    ranks = [0.0] * len(xs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def pearson(a, b):
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    return cov / (va * vb) ** 0.5


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=3, max_size=30))
def test_spearman_matches_rank_pearson(pairs):
    xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        with pytest.raises(ValueError):
            spearman(xs, ys)
        return
    assert spearman(xs, ys) == pytest.approx(pearson(average_ranks(xs), average_ranks(ys)))


def test_spearman_errors():
    assert spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1)
    with pytest.raises(ValueError):
        spearman([1, 2], [1])
    with pytest.raises(ValueError):
        spearman([1], [1])
