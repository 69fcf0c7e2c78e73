"""Distances between profiles and a planar map of a dataset.

Profiles are compared up to renaming candidates and reordering voters:
for every candidate relabelling the voters are matched one-to-one at
minimum total swap distance (an assignment problem).
"""

from __future__ import annotations

import itertools
import math
from html import escape
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import PartialRankMatrix

MAX_RELABEL_M = 8


class MapError(ValueError):
    pass


class MapLimitError(MapError):
    """Too many candidates for exhaustive relabelling."""


def swap_distance(b1: Sequence[int], b2: Sequence[int]) -> int:
    """Number of candidate pairs the two ballots order differently."""
    if len(b1) != len(b2) or sorted(b1) != sorted(b2):
        raise MapError("ballots must rank the same candidates")
    pos = {c: k for k, c in enumerate(b2)}
    seq = [pos[c] for c in b1]
    return sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])


def _pair_bits(cells, m: int, perm=None) -> np.ndarray:
    """``bits[v, p]`` = 1 when voter ``v`` puts the smaller candidate of pair
    ``p`` first; candidates are renamed by ``perm`` beforehand."""
    pos = np.empty((len(cells), m), dtype=np.int64)
    for v, row in enumerate(cells):
        for k, c in enumerate(row):
            pos[v, c if perm is None else perm[c]] = k
    a, b = np.triu_indices(m, 1)
    return (pos[:, a] < pos[:, b]).astype(np.int64)


def _check_pair(p1: PartialRankMatrix, p2: PartialRankMatrix, max_m: int) -> None:
    if p1.n != p2.n or p1.m != p2.m:
        raise MapError("profiles must have the same dimensions")
    if not (p1.is_complete and p2.is_complete):
        raise MapError("profiles must be complete")
    if p1.m > max_m:
        raise MapLimitError(f"m={p1.m} exceeds the relabelling limit {max_m}")


def _matching_cost(x: np.ndarray, y: np.ndarray) -> int:
    # Hamming distance between 0/1 rows: x.(1-y) + (1-x).y
    cost = x @ (1 - y).T + (1 - x) @ y.T
    r, c = linear_sum_assignment(cost)
    return int(cost[r, c].sum())


def isomorphic_distance(
    p1: PartialRankMatrix, p2: PartialRankMatrix, max_m: int = MAX_RELABEL_M
) -> int:
    """Minimum total swap distance over relabellings and voter matchings."""
    _check_pair(p1, p2, max_m)
    m = p1.m
    x = _pair_bits(p1.cells, m)
    return min(_matching_cost(x, y) for y in _relabelled(p2, m))


def _relabelled(p: PartialRankMatrix, m: int) -> list[np.ndarray]:
    return [_pair_bits(p.cells, m, perm) for perm in itertools.permutations(range(m))]


def _row_distances(args):
    i, bits, variants = args
    return [min(_matching_cost(bits[i], y) for y in variants[j]) for j in range(i + 1, len(bits))]


def distance_matrix(profiles: Sequence[PartialRankMatrix], jobs: int = 1) -> np.ndarray:
    """Symmetric matrix of isomorphic swap distances."""
    k = len(profiles)
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    for p in profiles[1:]:
        _check_pair(profiles[0], p, MAX_RELABEL_M)
    _check_pair(profiles[0], profiles[0], MAX_RELABEL_M)
    m = profiles[0].m
    bits = [_pair_bits(p.cells, m) for p in profiles]
    variants = [_relabelled(p, m) for p in profiles]
    tasks = [(i, bits, variants) for i in range(k)]
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            rows = pool.map(_row_distances, tasks)
    else:
        rows = [_row_distances(t) for t in tasks]
    d = np.zeros((k, k), dtype=np.int64)
    for i, row in enumerate(rows):
        d[i, i + 1 :] = row
        d[i + 1 :, i] = row
    return d


def _power(a: np.ndarray, v: np.ndarray, tol: float, max_iter: int):
    """Dominant (largest magnitude) eigenpair of symmetric ``a``."""
    v = v / np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        lam = float(v @ w)
        if np.linalg.norm(w - lam * v) <= tol * max(abs(lam), 1e-300):
            break
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0, v
        v = w / nw
    return lam, v


def _top_eigenpair(b: np.ndarray, tol: float = 1e-12, max_iter: int = 100000):
    """Largest (algebraic) eigenvalue of symmetric ``b`` by power iteration.

    When the dominant eigenvalue is negative the matrix is shifted by it,
    which makes the largest eigenvalue dominant, and iterated again.
    """
    k = b.shape[0]
    if not np.any(b):
        return 0.0, np.zeros(k)
    start = np.linspace(1.0, 2.0, k) + 1e-3 * np.cos(np.arange(k))  # deterministic
    lam, v = _power(b, start, tol, max_iter)
    if lam < 0:
        top, v = _power(b - lam * np.eye(k), start, tol, max_iter)
        lam = top + lam
    return lam, v


def mds_embed(d, dims: int = 2) -> np.ndarray:
    """Classical scaling of a distance matrix into ``dims`` coordinates."""
    d = np.asarray(d, dtype=float)
    k = d.shape[0]
    if d.ndim != 2 or d.shape != (k, k):
        raise MapError("distance matrix must be square")
    if k < 2:
        raise MapError("need at least two points")
    if not np.allclose(d, d.T) or np.any(np.diag(d) != 0) or np.any(d < 0):
        raise MapError("distances must be symmetric, non-negative, zero on the diagonal")
    j = np.eye(k) - np.ones((k, k)) / k
    b = -0.5 * j @ (d**2) @ j
    out = np.zeros((k, dims))
    for t in range(dims):
        lam, v = _top_eigenpair(b)
        if lam <= 1e-9 * max(1.0, float(np.abs(b).max())):
            break
        out[:, t] = math.sqrt(lam) * v
        b = b - lam * np.outer(v, v)
    return out - out.mean(axis=0)


_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#3182bd", "#e6550d", "#31a354",
)


def _ramp(t: float) -> str:
    # light yellow to dark red
    t = min(max(t, 0.0), 1.0)
    r = int(255 - 100 * t)
    g = int(230 * (1 - t))
    b = int(120 * (1 - t))
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(points, labels: Sequence[str], values: Sequence[float] | None = None,
               title: str = "", size: int = 600) -> str:
    """Scatter plot as SVG text.

    With ``values`` the circles are shaded on a colour ramp between the
    smallest and largest value; otherwise they are coloured by label and a
    legend lists the labels.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) != len(labels):
        raise MapError("one label per point is required")
    margin = 40
    legend_w = 0 if values is not None else 170
    lo = pts.min(axis=0) if len(pts) else np.zeros(2)
    hi = pts.max(axis=0) if len(pts) else np.ones(2)
    span = float(max((hi - lo).max(), 1e-9))

    def xy(p):
        x = margin + (p[0] - lo[0]) / span * (size - 2 * margin)
        y = size - margin - (p[1] - lo[1]) / span * (size - 2 * margin)
        return x, y

    width = size + legend_w
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size}" '
        f'viewBox="0 0 {width} {size}">',
        f'<rect width="{width}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{margin}" y="20" font-family="sans-serif" font-size="14">{escape(title)}</text>')
    names = list(dict.fromkeys(labels))
    colours = {name: _PALETTE[i % len(_PALETTE)] for i, name in enumerate(names)}
    if values is not None:
        vmin, vmax = min(values), max(values)
        scale = (vmax - vmin) or 1.0
    for i, p in enumerate(pts):
        x, y = xy(p)
        if values is not None:
            fill = _ramp((values[i] - vmin) / scale)
        else:
            fill = colours[labels[i]]
        out.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="6" fill="{fill}" stroke="black" '
            f'stroke-width="0.5"><title>{escape(str(labels[i]))}</title></circle>'
        )
    if values is None:
        for k, name in enumerate(names):
            y = margin + 18 * k
            out.append(f'<circle cx="{size + 10}" cy="{y}" r="6" fill="{colours[name]}"/>')
            out.append(
                f'<text x="{size + 22}" y="{y + 4}" font-family="sans-serif" '
                f'font-size="12">{escape(name)}</text>'
            )
    else:
        out.append(
            f'<text x="{margin}" y="{size - 10}" font-family="sans-serif" font-size="12">'
            f"light = {vmin:.3g}, dark = {vmax:.3g}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
