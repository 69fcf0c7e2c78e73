import itertools
import random

import pytest

from votexp import kernels
from votexp.core import from_names, make_matrix
from votexp.scoring import ScoringVector, winners

NAMES = ("A", "B", "C", "D")


def grid(*rows, names=NAMES):
    """Matrix from rows of names, ``.`` for a free cell."""
    return from_names([r.split() for r in rows], names)


@pytest.fixture
def example1():
    return grid("A B C D", "B C D A", "A D C B", "D C A B")


@pytest.fixture
def x1():
    return grid("A B . .", ". C D .", "A D . .", ". . . B")


@pytest.fixture
def x2():
    return grid(". B C D", "B . . .", "A D . .", ". . . B")


@pytest.fixture
def x3():
    return grid("A . C D", "B . . .", "A D . .", ". . . B")


@pytest.fixture
def y1():
    return grid("A . C .", ". . . .", ". . . .", ". . . .")


@pytest.fixture
def borda4():
    return ScoringVector.borda(4)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


def random_profile(rng, n, m):
    return make_matrix([rng.sample(range(m), m) for _ in range(n)])


def random_case(rng, max_n=4, max_m=4, max_cells=None):
    """A random complete profile, a rule and one of its winners."""
    while True:
        n = rng.randint(1, max_n)
        m = rng.randint(2, max_m)
        if max_cells is None or n * m <= max_cells:
            break
    full = random_profile(rng, n, m)
    rule = rng.choice([ScoringVector.borda(m), ScoringVector.plurality(m)])
    w = rng.choice(sorted(winners(full, rule)))
    return full, rule, w


def all_profiles(n, m):
    """Every complete n x m profile with voters in sorted order."""
    perms = list(itertools.permutations(range(m)))
    for rows in itertools.combinations_with_replacement(perms, n):
        yield make_matrix(rows)


@pytest.fixture
def rng():
    return random.Random(20261016)
