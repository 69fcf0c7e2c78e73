"""Brute-force reference implementations for cross-checking.

Nothing here relies on the min/max score characterisation of necessary
winners: completions are enumerated explicitly.  Guards raise
:class:`OracleLimitError` instead of silently truncating.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import PartialRankMatrix, make_matrix
from .scoring import ScoringVector
from .xplain import Explanation

MAX_COMPLETIONS = 10**6
MAX_CELLS = 16
MAX_ROW_CANDIDATES = 8


class OracleLimitError(RuntimeError):
    pass


def row_completions(row, m):
    """All complete ballots extending a partial ballot."""
    free_pos = [k for k, c in enumerate(row) if c == m]
    missing = [c for c in range(m) if c not in row]
    for perm in itertools.permutations(missing):
        out = list(row)
        for k, c in zip(free_pos, perm):
            out[k] = c
        yield tuple(out)


def count_completions(part: PartialRankMatrix) -> int:
    total = 1
    for i in range(part.n):
        total *= math.factorial(part.m - part.row_size(i))
    return total


def completions(part: PartialRankMatrix):
    """Every complete extension of ``part`` (as tuples of rows)."""
    rows = [list(row_completions(r, part.m)) for r in part.cells]
    return itertools.product(*rows)


def brute_nw(part: PartialRankMatrix, rule: ScoringVector, w: int) -> bool:
    """``w`` wins (possibly tied) in every completion, checked one by one."""
    if count_completions(part) > MAX_COMPLETIONS:
        raise OracleLimitError("too many completions for exhaustive checking")
    m = part.m
    ws = rule.weights
    for full in completions(part):
        s = [0] * m
        for row in full:
            for k, c in enumerate(row):
                s[c] += ws[k]
        if s[w] < max(s):
            return False
    return True


def _row_gain_table(full: PartialRankMatrix, rule: ScoringVector, w: int) -> np.ndarray:
    """``T[i, mask, c]``: best ``score(c) - score(w)`` over completions of row
    ``i`` restricted to the cells in ``mask`` (bit ``k`` = position ``k``)."""
    n, m = full.n, full.m
    ws = rule.weights
    table = np.zeros((n, 1 << m, m), dtype=np.int64)
    for i, row in enumerate(full.cells):
        for mask in range(1 << m):
            part = tuple(row[k] if mask >> k & 1 else m for k in range(m))
            best = [-(10**9)] * m
            for comp in row_completions(part, m):
                pw = ws[comp.index(w)]
                for k, c in enumerate(comp):
                    g = ws[k] - pw
                    if g > best[c]:
                        best[c] = g
            table[i, mask] = best
    table[:, :, w] = 0
    return table


def _nw_all_subsets(full: PartialRankMatrix, rule: ScoringVector, w: int) -> np.ndarray:
    """NW status for every locked-cell subset (bit ``i*m + k``)."""
    n, m = full.n, full.m
    table = _row_gain_table(full, rule, w)
    subsets = np.arange(1 << (n * m), dtype=np.int64)
    low = (1 << m) - 1
    gain = np.zeros((subsets.size, m), dtype=np.int64)
    for i in range(n):
        gain += table[i][(subsets >> (i * m)) & low]
    # completions are a product over rows, so per-row maxima add up
    return (gain <= 0).all(axis=1)


def _minimal(masks) -> list[int]:
    """Inclusion-minimal members of a family of bitmasks."""
    found: list[int] = []
    for x in sorted(masks, key=lambda v: (bin(v).count("1"), v)):
        if not any(f & ~x == 0 for f in found):
            found.append(x)
    return found


def _shaped(mask: int, n: int, m: int) -> bool:
    low = (1 << m) - 1
    return all(bin((mask >> (i * m)) & low).count("1") != m - 1 for i in range(n))


def brute_xps(
    full: PartialRankMatrix, rule: ScoringVector, w: int
) -> tuple[list[Explanation], list[Explanation]]:
    """All iAXps and CXps by exhaustive search over the cell subsets."""
    n, m = full.n, full.m
    if not full.is_complete:
        raise ValueError("brute_xps needs a complete profile")
    if n * m > MAX_CELLS or m > MAX_ROW_CANDIDATES:
        raise OracleLimitError(f"{n}x{m} is too large for subset enumeration")
    nw = _nw_all_subsets(full, rule, w)
    allbits = (1 << (n * m)) - 1
    weak = [x for x in np.flatnonzero(nw).tolist() if _shaped(x, n, m)]
    breaking = [allbits ^ x for x in np.flatnonzero(~nw).tolist()]
    iaxps = [Explanation("iAXp", _decode(full, x), w, rule) for x in _minimal(weak)]
    cxps = [Explanation("CXp", _decode(full, y), w, rule) for y in _minimal(breaking)]
    return iaxps, cxps


def _decode(full: PartialRankMatrix, mask: int) -> PartialRankMatrix:
    m = full.m
    return full.restrict([divmod(v, m) for v in range(full.n * m) if mask >> v & 1])


@dataclass(frozen=True)
class NormalFormSpec:
    """A single ballot locking ``k1`` top cells and ``k2`` bottom cells."""

    k1: int
    k2: int
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("normal forms need m >= 2")
        if self.k1 < 0 or self.k2 < 0 or self.k1 + self.k2 > self.m:
            raise ValueError(f"invalid normal form parameters {self.k1}, {self.k2} for m={self.m}")
        if self.k1 + self.k2 == self.m:
            object.__setattr__(self, "k1", self.m)
            object.__setattr__(self, "k2", 0)


def make_normal_form(spec: NormalFormSpec, w: int = 0) -> PartialRankMatrix:
    """Ballot with ``w`` first (when ``k1 > 0``), free cells in the middle.

    The other locked candidates are taken in increasing id order.
    """
    m = spec.m
    others = [c for c in range(m) if c != w]
    row = [m] * m
    if spec.k1 > 0:
        top = [w] + others[: spec.k1 - 1]
        bottom = others[spec.k1 - 1 : spec.k1 - 1 + spec.k2]
    else:
        top = []
        bottom = others[: spec.k2]
    for k, c in enumerate(top):
        row[k] = c
    for k, c in enumerate(bottom):
        row[m - spec.k2 + k] = c
    return make_matrix([row])


def normal_form_margin(spec: NormalFormSpec) -> float:
    """Closed-form total margin of a normal-form ballot under Borda."""
    k1, k2, m = spec.k1, spec.k2, spec.m
    if k1 > 0:
        return (k1 + k2) * (m - (k1 + k2 + 1) / 2)
    return -((m - 1 - k2) ** 2) + k2 * (k2 + 1) / 2


MAX_DP_STATES = 4 * 10**6


def smallest_iaxp_size(full: PartialRankMatrix, rule: ScoringVector, w: int) -> int:
    """Size of a smallest iAXp, by dynamic programming over the rows.

    Every row picks one lock pattern with zero or at least two free cells;
    the winner survives exactly when, for each rival, the per-row best
    gains over ``w`` (taken from explicit row completions) sum to at most
    zero.  The table holds the fewest locked cells per reachable vector of
    summed gains.  The smallest surviving pattern choice is an iAXp, since
    a smaller surviving subset would be a cheaper choice.
    """
    if not full.is_complete:
        raise ValueError("smallest_iaxp_size needs a complete profile")
    n, m = full.n, full.m
    if m > MAX_ROW_CANDIDATES:
        raise OracleLimitError(f"m={m} is too large for row completion tables")
    table = _row_gain_table(full, rule, w)
    rivals = [c for c in range(m) if c != w]
    masks = [mk for mk in range(1 << m) if bin(mk).count("1") != m - 1]
    lo = np.zeros(len(rivals), dtype=np.int64)
    hi = np.zeros(len(rivals), dtype=np.int64)
    for i in range(n):
        g = table[i][masks][:, rivals]
        # partial sums must fit too, so clamp each row's span to include 0
        lo += np.minimum(g.min(axis=0), 0)
        hi += np.maximum(g.max(axis=0), 0)
    shape = tuple(int(h - l + 1) for l, h in zip(lo, hi))
    if math.prod(shape) > MAX_DP_STATES:
        raise OracleLimitError(f"{math.prod(shape)} gain vectors exceed the table limit")
    big = n * m + 1
    cost = np.full(shape, big, dtype=np.int32)
    # index of gain vector g is g - lo
    cost[tuple(-lo)] = 0
    for i in range(n):
        nxt = np.full(shape, big, dtype=np.int32)
        for mk in masks:
            g = table[i, mk, rivals]
            src = tuple(slice(max(0, -d), s - max(0, d)) for d, s in zip(g, shape))
            dst = tuple(slice(max(0, d), s - max(0, -d)) for d, s in zip(g, shape))
            np.minimum(nxt[dst], cost[src] + bin(mk).count("1"), out=nxt[dst])
        cost = nxt
    feasible = tuple(slice(0, int(-l) + 1) for l in lo)
    best = int(cost[feasible].min())
    if best >= big:
        raise RuntimeError("no surviving pattern choice; w is not a winner")
    return best
