import json

import pytest

from votexp.core import complement, make_matrix
from votexp.oracle import brute_xps
from votexp.scoring import ScoringVector, is_necessary_winner, sigma_max, sigma_min
from votexp.xplain import (
    Explanation,
    PreconditionError,
    explanation_from_dict,
    find_cxp,
    find_iaxp,
    is_irredundant_shape,
    verify_axp,
    verify_cxp,
    verify_iaxp,
)

from conftest import grid, random_case


def test_fixture_verdicts(example1, x1, x2, x3, y1, borda4):
    assert verify_axp(example1, borda4, 0, x1)
    assert verify_iaxp(example1, borda4, 0, x1)
    assert verify_cxp(example1, borda4, 0, y1)
    assert verify_axp(example1, borda4, 0, x2)
    assert verify_axp(example1, borda4, 0, x3)
    assert not verify_iaxp(example1, borda4, 0, x2)  # row 1 has one free cell


def test_fixture_score_tables(example1, x1, y1, borda4):
    assert sigma_min(x1, borda4, 0) == 7
    assert [sigma_max(x1, borda4, c) for c in (1, 2, 3)] == [6, 7, 7]
    rest = complement(example1, y1)
    assert sigma_min(rest, borda4, 0) == 5
    assert [sigma_max(rest, borda4, c) for c in (1, 2, 3)] == [5, 8, 6]


def test_verify_rejects_non_minimal(example1, x1, borda4):
    assert not verify_axp(example1, borda4, 0, example1)
    bigger = example1.restrict(sorted(x1.cellset() | {(3, 0)}))
    assert not verify_iaxp(example1, borda4, 0, bigger)
    assert not verify_cxp(example1, borda4, 0, example1)
    assert not verify_axp(example1, borda4, 0, example1.empty())


def test_verify_rejects_foreign_cells(example1, borda4):
    other = grid("B A . .", ". . . .", ". . . .", ". . . .")
    with pytest.raises(ValueError):
        verify_axp(example1, borda4, 0, other)


def test_find_on_example(example1, borda4, backend):
    axp = find_iaxp(example1, borda4, 0, backend=backend)
    assert verify_iaxp(example1, borda4, 0, axp.cells)
    assert axp.kind == "iAXp" and axp.winner == 0
    cxp = find_cxp(example1, borda4, 0, backend=backend)
    assert verify_cxp(example1, borda4, 0, cxp.cells)


def test_find_respects_seed(example1, x1, y1, borda4):
    # minimal seeds come back unchanged
    assert find_iaxp(example1, borda4, 0, x1).cells == x1
    assert find_cxp(example1, borda4, 0, y1).cells == y1


def test_preconditions(example1, x1, x2, borda4):
    with pytest.raises(PreconditionError):
        find_iaxp(example1, borda4, 1)  # B is not a winner
    with pytest.raises(PreconditionError):
        find_iaxp(example1, borda4, 0, x2)  # row with one free cell
    with pytest.raises(PreconditionError):
        find_iaxp(example1, borda4, 0, example1.empty())
    with pytest.raises(PreconditionError):
        find_cxp(example1, borda4, 0, complement(example1, x1))
    with pytest.raises(PreconditionError):
        find_iaxp(x1, borda4, 0)
    with pytest.raises(PreconditionError):
        find_iaxp(example1, ScoringVector.borda(3), 0)


def test_cxp_order(example1, borda4):
    cells = sorted(example1.cellset(), reverse=True)
    cxp = find_cxp(example1, borda4, 0, order=cells)
    assert verify_cxp(example1, borda4, 0, cxp.cells)
    with pytest.raises(ValueError):
        find_cxp(example1, borda4, 0, order=cells[1:])


def test_json_roundtrip(example1, borda4):
    xp = find_iaxp(example1, borda4, 0)
    data = json.loads(xp.to_json())
    assert data["size"] == xp.size
    assert set(data) == {"kind", "winner", "rule", "size", "cells"}
    back = explanation_from_dict(data, example1, borda4)
    assert back == xp
    data["cells"][0]["candidate"] = "Z"
    with pytest.raises(ValueError):
        explanation_from_dict(data, example1, borda4)


def test_unknown_kind(x1, borda4):
    with pytest.raises(ValueError):
        Explanation("PI", x1, 0, borda4)


def test_irredundant_shape(x1, x2):
    assert is_irredundant_shape(x1)
    assert not is_irredundant_shape(x2)


def test_random_results_are_explanations(rng, backend):
    for _ in range(300):
        full, rule, w = random_case(rng, max_n=5, max_m=5)
        axp = find_iaxp(full, rule, w, backend=backend)
        assert verify_iaxp(full, rule, w, axp.cells)
        cxp = find_cxp(full, rule, w, backend=backend)
        assert verify_cxp(full, rule, w, cxp.cells)


def test_results_belong_to_brute_force_families(rng):
    for _ in range(150):
        full, rule, w = random_case(rng, max_n=4, max_m=4, max_cells=12)
        iaxps, cxps = brute_xps(full, rule, w)
        assert find_iaxp(full, rule, w).cellset() in {x.cellset() for x in iaxps}
        assert find_cxp(full, rule, w).cellset() in {x.cellset() for x in cxps}


def test_verify_iaxp_agrees_with_oracle(rng):
    """Every brute-force iAXp passes; random shaped supersets do not."""
    for _ in range(80):
        full, rule, w = random_case(rng, max_n=3, max_m=4)
        iaxps, _ = brute_xps(full, rule, w)
        for xp in iaxps:
            assert verify_iaxp(full, rule, w, xp.cells)
            assert is_necessary_winner(xp.cells, rule, w)


def test_single_voter_plurality():
    full = make_matrix([[1, 0, 2]])
    rule = ScoringVector.plurality(3)
    axp = find_iaxp(full, rule, 1)
    assert axp.cellset() == {(0, 0)}
    # one freed cell is forced back; B must be able to leave the top
    assert find_cxp(full, rule, 1).cellset() == {(0, 0), (0, 2)}


def test_stats_counters(example1, borda4):
    xp = find_iaxp(example1, borda4, 0)
    assert set(xp.stats) == {"nw_queries", "mutations", "work"}
    assert xp.stats["nw_queries"] > 0
