import pytest
from hypothesis import given, strategies as st

from votexp.core import (
    PartialRankMatrix,
    ProfileError,
    RankMatrix,
    complement,
    from_names,
    is_extension,
    make_matrix,
    parse_profile,
    read_profile,
    serialize,
    size,
    write_profile,
)

from conftest import grid


@st.composite
def partials(draw, max_n=4, max_m=5):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    rows = []
    for _ in range(n):
        perm = draw(st.permutations(range(m)))
        mask = draw(st.lists(st.booleans(), min_size=m, max_size=m))
        rows.append([c if keep else m for c, keep in zip(perm, mask)])
    return make_matrix(rows)


def test_make_matrix_picks_class(example1, x1):
    assert isinstance(example1, RankMatrix)
    assert example1.is_complete
    assert not isinstance(x1, RankMatrix)
    assert x1.null == 4


def test_example_fixture_sizes(example1, x1, x2, x3, y1):
    assert size(example1) == 16
    # counted from the printed fixture
    assert size(x1) == 7
    assert size(x2) == 7
    assert size(x3) == 7
    assert size(y1) == 2


@pytest.mark.parametrize(
    "cells",
    [
        [[0, 0]],  # duplicate candidate
        [[0, 5]],  # id above the null sentinel
        [[0, 1], [0]],  # ragged
        [[-1, 0]],
    ],
)
def test_invalid_cells(cells):
    with pytest.raises(ProfileError):
        make_matrix(cells)


def test_rank_matrix_rejects_free_cells():
    with pytest.raises(ProfileError):
        RankMatrix(((0, 2),))


def test_duplicate_null_is_allowed():
    part = make_matrix([[2, 2]])
    assert size(part) == 0
    assert part.row_size(0) == 0


def test_extension_and_complement(example1, x1, y1):
    assert is_extension(x1, example1)
    assert not is_extension(example1, x1)
    assert is_extension(example1.empty(), x1)
    rest = complement(example1, y1)
    assert size(rest) == 14
    assert rest.cellset() == example1.cellset() - y1.cellset()
    with pytest.raises(ProfileError):
        complement(x1, example1)


def test_dimension_mismatch(example1):
    with pytest.raises(ProfileError):
        is_extension(make_matrix([[0, 1]]), example1)


def test_restrict_and_cellset(example1):
    part = example1.restrict([(0, 0), (3, 3)])
    assert part.cellset() == {(0, 0), (3, 3)}
    assert part[3, 3] == 1  # B
    with pytest.raises((ProfileError, IndexError)):
        example1.restrict([(7, 0)])


def test_parse_roundtrip(tmp_path, x1):
    text = serialize(x1)
    assert text.splitlines()[0] == "4 4"
    assert text.splitlines()[2] == "A B - -"
    assert parse_profile(text) == x1
    path = tmp_path / "p.prof"
    write_profile(x1, path)
    assert read_profile(path) == x1


def test_parse_comments_and_blank_lines():
    text = "# header\n2 2\n\nX Y  # names\nX Y\nY -\n"
    part = parse_profile(text)
    assert part.names == ("X", "Y")
    assert part.cells == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\nA B\nA B\nB A\n",
        "x y\nA B\n",
        "2 2\nA\nA B\nB A\n",
        "2 2\nA B\nA B\n",
        "1 2\nA B\nA B C\n",
        "1 2\nA B\nA Z\n",
        "1 2\nA B\nA A\n",
        "1 2\nA -\nA -\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ProfileError):
        parse_profile(text)


def test_from_names_default_names():
    assert from_names(["AB", "BA"]).cells == ((0, 1), (1, 0))


@given(partials())
def test_serialize_roundtrip_property(part):
    assert parse_profile(serialize(part)) == part


@given(partials(), st.data())
def test_complement_partition(part, data):
    # completing the rows gives a full matrix containing part
    m = part.m
    full_rows = []
    for row in part.cells:
        missing = [c for c in range(m) if c not in row]
        it = iter(missing)
        full_rows.append([next(it) if c == m else c for c in row])
    full = make_matrix(full_rows)
    assert is_extension(part, full)
    rest = complement(full, part)
    assert rest.cellset().isdisjoint(part.cellset())
    assert rest.cellset() | part.cellset() == full.cellset()
    assert complement(full, rest) == part
    assert size(rest) + size(part) == full.n * full.m


def test_partial_rank_matrix_is_hashable(x1):
    assert len({x1, grid("A B . .", ". C D .", "A D . .", ". . . B")}) == 1
    assert isinstance(x1, PartialRankMatrix)
