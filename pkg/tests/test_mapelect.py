import itertools
import random

import numpy as np
import pytest

from votexp.core import make_matrix
from votexp.mapelect import (
    MapError,
    MapLimitError,
    distance_matrix,
    isomorphic_distance,
    mds_embed,
    render_svg,
    swap_distance,
)

from conftest import random_profile


def brute_swap(b1, b2):
    pos1 = {c: k for k, c in enumerate(b1)}
    pos2 = {c: k for k, c in enumerate(b2)}
    return sum(
        1
        for a, b in itertools.combinations(b1, 2)
        if (pos1[a] < pos1[b]) != (pos2[a] < pos2[b])
    )


def brute_isomorphic(p1, p2):
    m = p1.m
    best = None
    for perm in itertools.permutations(range(m)):
        renamed = [[perm[c] for c in row] for row in p2.cells]
        for order in itertools.permutations(range(p1.n)):
            d = sum(brute_swap(p1.cells[i], renamed[j]) for i, j in enumerate(order))
            best = d if best is None else min(best, d)
    return best


def test_swap_distance():
    assert swap_distance([0, 1, 2], [0, 1, 2]) == 0
    assert swap_distance([0, 1, 2], [2, 1, 0]) == 3
    rng = random.Random(1)
    for _ in range(200):
        m = rng.randint(1, 7)
        a, b = rng.sample(range(m), m), rng.sample(range(m), m)
        assert swap_distance(a, b) == brute_swap(a, b)
    with pytest.raises(MapError):
        swap_distance([0, 1], [0, 2])


def test_isomorphic_matches_brute_force():
    rng = random.Random(4)
    for _ in range(40):
        n, m = rng.randint(1, 4), rng.randint(2, 4)
        p1, p2 = random_profile(rng, n, m), random_profile(rng, n, m)
        assert isomorphic_distance(p1, p2) == brute_isomorphic(p1, p2)


def test_isomorphic_invariances():
    rng = random.Random(6)
    p = random_profile(rng, 6, 5)
    perm = rng.sample(range(5), 5)
    renamed = make_matrix([[perm[c] for c in row] for row in reversed(p.cells)])
    assert isomorphic_distance(p, renamed) == 0


def test_identity_antagonism_distance():
    ident = make_matrix([[0, 1, 2, 3]] * 4)
    anta = make_matrix([[0, 1, 2, 3]] * 2 + [[3, 2, 1, 0]] * 2)
    assert isomorphic_distance(ident, anta) == 2 * 6


def test_distance_matrix_is_a_pseudometric():
    rng = random.Random(8)
    profiles = [random_profile(rng, 4, 4) for _ in range(7)]
    d = distance_matrix(profiles)
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    for i, j, k in itertools.permutations(range(7), 3):
        assert d[i, k] <= d[i, j] + d[j, k]
    assert d[1, 4] == isomorphic_distance(profiles[1], profiles[4])


def test_distance_matrix_jobs_agree():
    rng = random.Random(9)
    profiles = [random_profile(rng, 5, 4) for _ in range(5)]
    assert (distance_matrix(profiles, jobs=2) == distance_matrix(profiles)).all()
    assert distance_matrix([]).shape == (0, 0)


def test_distance_preconditions():
    a = make_matrix([[0, 1, 2]])
    with pytest.raises(MapError):
        isomorphic_distance(a, make_matrix([[0, 1, 2]] * 2))
    with pytest.raises(MapError):
        isomorphic_distance(a, make_matrix([[0, 3, 3]]))
    big = make_matrix([list(range(9))])
    with pytest.raises(MapLimitError):
        isomorphic_distance(big, big)


def pairwise(points):
    return np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)


def test_mds_two_points():
    pts = mds_embed([[0, 10], [10, 0]])
    assert sorted(pts[:, 0].round(9).tolist()) == [-5, 5]
    assert np.allclose(pts[:, 1], 0)


def test_mds_equilateral_triangle():
    d = np.ones((3, 3)) - np.eye(3)
    assert np.allclose(pairwise(mds_embed(d)), d)


def test_mds_recovers_planar_points():
    rng = np.random.default_rng(3)
    pts = rng.random((12, 2))
    d = pairwise(pts)
    assert np.allclose(pairwise(mds_embed(d)), d, atol=1e-9)


def test_mds_of_collinear_points_and_zeros():
    d = pairwise(np.array([[0.0], [1.0], [3.0]]))
    out = mds_embed(d)
    assert np.allclose(pairwise(out), d)
    assert np.allclose(out[:, 1], 0)
    assert np.allclose(mds_embed(np.zeros((3, 3))), 0)


@pytest.mark.parametrize(
    "d", [[[0]], [[0, 1], [2, 0]], [[1, 1], [1, 1]], [[0, -1], [-1, 0]], [[0, 1, 2]]]
)
def test_mds_rejects_bad_input(d):
    with pytest.raises(MapError):
        mds_embed(d)


def test_render_svg():
    pts = np.array([[0.0, 0.0], [1.0, 2.0]])
    svg = render_svg(pts, ["IC", "A&B"], title="map <1>")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == 4  # two points, two legend entries
    assert "A&amp;B" in svg and "map &lt;1&gt;" in svg
    shaded = render_svg(pts, ["x", "y"], values=[1, 5])
    assert "light = 1, dark = 5" in shaded
    with pytest.raises(MapError):
        render_svg(pts, ["x"])
