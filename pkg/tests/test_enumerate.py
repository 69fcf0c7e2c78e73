import pytest

from votexp.core import make_matrix
from votexp.enumerate import (
    SMALLEST_METHODS,
    borda_floor,
    enumerate_xps,
    find_smallest_cxp,
    find_smallest_iaxp,
)
from votexp.oracle import brute_xps, smallest_iaxp_size
from votexp.scoring import ScoringVector
from votexp.xplain import PreconditionError, verify_cxp, verify_iaxp

from conftest import random_case


def cellsets(xps):
    return {x.cellset() for x in xps}


def test_example_enumeration_matches_oracle(example1, borda4, backend):
    iaxps, cxps = enumerate_xps(example1, borda4, 0, backend=backend)
    bi, bc = brute_xps(example1, borda4, 0)
    assert cellsets(iaxps) == cellsets(bi)
    assert cellsets(cxps) == cellsets(bc)
    assert len(iaxps) == len(cellsets(iaxps))  # no duplicates


def test_example_contains_fixtures(example1, x1, y1, borda4):
    iaxps, cxps = enumerate_xps(example1, borda4, 0)
    assert x1.cellset() in cellsets(iaxps)
    assert y1.cellset() in cellsets(cxps)


def test_limit(example1, borda4):
    iaxps, cxps = enumerate_xps(example1, borda4, 0, limit=5)
    assert len(iaxps) + len(cxps) == 5


def test_not_a_winner(example1, borda4):
    with pytest.raises(PreconditionError):
        enumerate_xps(example1, borda4, 1)
    with pytest.raises(PreconditionError):
        find_smallest_iaxp(example1, borda4, 3)


def test_random_enumeration_matches_oracle(rng):
    for _ in range(60):
        full, rule, w = random_case(rng, max_n=4, max_m=4, max_cells=12)
        iaxps, cxps = enumerate_xps(full, rule, w)
        bi, bc = brute_xps(full, rule, w)
        assert cellsets(iaxps) == cellsets(bi)
        assert cellsets(cxps) == cellsets(bc)


def test_borda_floor():
    full = make_matrix([[0, 1, 2]] * 7)
    assert borda_floor(full, ScoringVector.borda(3)) == 7 - 7 // 3
    assert borda_floor(full, ScoringVector((4, 2, 0))) == 5  # affine Borda
    assert borda_floor(full, ScoringVector.plurality(3)) == 0


@pytest.mark.parametrize("method", SMALLEST_METHODS)
def test_smallest_iaxp_matches_oracle(rng, method):
    for _ in range(80):
        full, rule, w = random_case(rng, max_n=4, max_m=4, max_cells=12)
        bi, _ = brute_xps(full, rule, w)
        xp = find_smallest_iaxp(full, rule, w, method=method)
        assert verify_iaxp(full, rule, w, xp.cells)
        assert xp.size == min(x.size for x in bi)
        assert xp.size == smallest_iaxp_size(full, rule, w)


def test_smallest_iaxp_without_floor(rng):
    for _ in range(30):
        full, rule, w = random_case(rng, max_n=4, max_m=4, max_cells=12)
        a = find_smallest_iaxp(full, rule, w, use_floor=False)
        b = find_smallest_iaxp(full, rule, w, use_floor=True)
        assert a.size == b.size


def test_smallest_iaxp_medium_profiles(rng):
    """Beyond subset enumeration: both methods against the row oracle."""
    for _ in range(6):
        full, rule, w = random_case(rng, max_n=7, max_m=4)
        sizes = {find_smallest_iaxp(full, rule, w, method=meth).size for meth in SMALLEST_METHODS}
        assert sizes == {smallest_iaxp_size(full, rule, w)}


def test_unknown_method(example1, borda4):
    with pytest.raises(ValueError):
        find_smallest_iaxp(example1, borda4, 0, method="anneal")


def test_smallest_cxp_matches_oracle(rng, backend):
    for _ in range(50):
        full, rule, w = random_case(rng, max_n=4, max_m=4, max_cells=12)
        _, bc = brute_xps(full, rule, w)
        xp = find_smallest_cxp(full, rule, w, backend=backend)
        assert verify_cxp(full, rule, w, xp.cells)
        assert xp.size == min(x.size for x in bc)


def test_identity_profile_smallest(borda4):
    full = make_matrix([[0, 1, 2, 3]] * 12)
    for method in SMALLEST_METHODS:
        assert find_smallest_iaxp(full, borda4, 0, method=method).size == 9
