import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from votexp import kernels


def brute_models(nvars, clauses):
    for values in itertools.product((0, 1), repeat=nvars):
        if all(any((values[abs(l) - 1] == 1) == (l > 0) for l in cl) for cl in clauses):
            yield values


@st.composite
def cnfs(draw):
    nvars = draw(st.integers(1, 8))
    lit = st.integers(1, nvars).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=12))
    return nvars, clauses


@pytest.mark.parametrize("name", kernels.available_backends())
@settings(max_examples=300, deadline=None)
@given(case=cnfs(), min_true=st.integers(0, 4))
def test_search_matches_brute_force(name, case, min_true):
    impl = kernels.get_backend(name)
    nvars, clauses = case
    models = list(brute_models(nvars, clauses))
    first, _ = impl.search(nvars, clauses)
    assert (first is None) == (not models)
    if models:
        assert tuple(first) == models[0]  # lexicographic order, False first
    eligible = [v for v in models if sum(v) >= min_true]
    best, _ = impl.search(nvars, clauses, nvars, 0, min_true)
    if not eligible:
        assert best is None
    else:
        want = min(eligible, key=lambda v: (sum(v), v))
        assert tuple(best) == want


@pytest.mark.parametrize("name", kernels.available_backends())
def test_search_bound_excludes_heavier_models(name):
    impl = kernels.get_backend(name)
    # at least two of three variables true
    clauses = [[1, 2], [1, 3], [2, 3]]
    assert impl.search(3, clauses, 1)[0] is None
    assert list(impl.search(3, clauses, 2)[0]) == [0, 1, 1]


def test_backends_agree_on_random_maps():
    names = kernels.available_backends()
    if len(names) < 2:
        pytest.skip("compiled backend not built")
    rng = random.Random(3)
    for _ in range(200):
        nvars = rng.randint(4, 14)
        clauses = [
            [rng.choice([1, -1]) * rng.randint(1, nvars) for _ in range(rng.randint(1, 4))]
            for _ in range(rng.randint(1, 25))
        ]
        floor = rng.randint(0, 3)
        out = [kernels.get_backend(b).search(nvars, clauses, nvars, 0, floor) for b in names]
        assert out[0] == out[1]


def test_backend_lookup():
    assert "python" in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
    assert kernels.BACKEND in kernels.available_backends()


def test_cache_query_cost_is_linear_in_m(backend):
    """An NW query costs m units of work and does not grow with n."""
    impl = kernels.get_backend(backend)
    for n, m in [(3, 4), (30, 4), (3, 9), (30, 9)]:
        rows = [list(range(m)) for _ in range(n)]
        cache = impl.ScoreCache(rows, list(range(m - 1, -1, -1)))
        before = cache.work
        cache.nw(0)
        assert cache.work - before == m
        before = cache.work
        cache.free(0, 0)
        assert cache.work - before == 2 * m  # one row refresh


@pytest.mark.parametrize("name", kernels.available_backends())
@settings(max_examples=300, deadline=None)
@given(case=cnfs(), extra=cnfs())
def test_resumed_search_matches_fresh_search(name, case, extra):
    """Starting from the first model of a clause subset changes nothing."""
    impl = kernels.get_backend(name)
    nvars, clauses = case
    more = [[l for l in cl if abs(l) <= nvars] for cl in extra[1]]
    more = [cl for cl in more if cl]
    start, _ = impl.search(nvars, clauses)
    if start is None:
        return
    fresh, _ = impl.search(nvars, clauses + more)
    resumed, _ = impl.search(nvars, clauses + more, start=start)
    assert resumed == fresh


@pytest.mark.parametrize("name", kernels.available_backends())
def test_start_argument_checks(name):
    impl = kernels.get_backend(name)
    with pytest.raises(ValueError):
        impl.search(2, [[1]], 2, 0, 0, [1, 0])
    with pytest.raises(ValueError):
        impl.search(2, [[1]], start=[1])
