"""Finding and checking single explanations.

An abductive explanation (AXp) is a subset-minimal set of locked cells that
makes ``w`` a necessary winner; the irredundant variant (iAXp) additionally
leaves every row with zero or at least two free cells.  A contrastive
explanation (CXp) is a subset-minimal set of cells whose freeing lets some
completion exclude ``w`` from the winners.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import PartialRankMatrix, complement, is_extension, make_matrix, size
from .scoring import ScoreCache, ScoringVector, is_necessary_winner, winners

KINDS = ("AXp", "iAXp", "CXp")


class PreconditionError(ValueError):
    """An algorithm was called outside its documented input domain."""


@dataclass(frozen=True)
class Explanation:
    kind: str
    cells: PartialRankMatrix
    winner: int
    rule: ScoringVector
    stats: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown explanation kind {self.kind!r}")

    @property
    def size(self) -> int:
        return size(self.cells)

    def cellset(self) -> frozenset[tuple[int, int]]:
        return self.cells.cellset()

    def to_dict(self) -> dict:
        names = self.cells.names
        return {
            "kind": self.kind,
            "winner": names[self.winner],
            "rule": self.rule.label,
            "size": self.size,
            "cells": [
                {"voter": i, "position": k, "candidate": names[self.cells[i, k]]}
                for i, k in self.cells.locked()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def explanation_from_dict(data: dict, full: PartialRankMatrix, rule: ScoringVector) -> Explanation:
    """Rebuild an explanation of ``full`` from its JSON form."""
    keep = []
    for cell in data["cells"]:
        i, k = int(cell["voter"]), int(cell["position"])
        if full.names[full[i, k]] != cell["candidate"]:
            raise ValueError(f"cell ({i}, {k}) does not match the profile")
        keep.append((i, k))
    return Explanation(data["kind"], full.restrict(keep), full.candidate_id(data["winner"]), rule)


def _check_common(full: PartialRankMatrix, rule: ScoringVector, w: int, seed: PartialRankMatrix) -> None:
    if not full.is_complete:
        raise PreconditionError("the explained profile must be complete")
    if rule.m != full.m:
        raise PreconditionError("rule length does not match the number of candidates")
    if not 0 <= w < full.m:
        raise PreconditionError(f"candidate id {w} out of range")
    if w not in winners(full, rule):
        raise PreconditionError(f"{full.names[w]} is not a winner of the profile")
    if not is_extension(seed, full):
        raise PreconditionError("seed is not contained in the profile")


def find_cxp(
    full: PartialRankMatrix,
    rule: ScoringVector,
    w: int,
    seed: PartialRankMatrix | None = None,
    backend: str | None = None,
    order=None,
) -> Explanation:
    """Shrink ``seed`` (cells to free) to one CXp.

    Works on the complement: each seed cell is locked back in row-major
    order and kept locked only if ``w`` is still not a necessary winner.
    ``order`` optionally lists the seed cells in a different visiting
    order (it must be a permutation of ``seed.locked()``).
    """
    if seed is None:
        seed = full
    _check_common(full, rule, w, seed)
    rest = complement(full, seed)
    if is_necessary_winner(rest, rule, w):
        raise PreconditionError("freeing the seed does not remove the winner")
    cells = list(seed.locked())
    if order is not None:
        order = [tuple(c) for c in order]
        if sorted(order) != cells:
            raise ValueError("order must be a permutation of the seed cells")
        cells = order
    cache = ScoreCache(rest, rule, backend)
    for i, k in cells:
        cache.lock(i, k, seed[i, k])
        if cache.nw(w):
            cache.free(i, k)
    keep = [(i, k) for i, k in seed.locked() if cache.is_null(i, k)]
    return Explanation("CXp", full.restrict(keep), w, rule, _stats(cache))


def find_iaxp(
    full: PartialRankMatrix,
    rule: ScoringVector,
    w: int,
    seed: PartialRankMatrix | None = None,
    backend: str | None = None,
) -> Explanation:
    """Shrink ``seed`` (cells to keep) to one iAXp.

    Cells are freed in row-major order.  The first cell freed in a full
    row triggers a search for a second cell of that row that can be freed
    with it; if none exists the first cell is locked again.
    """
    if seed is None:
        seed = full
    _check_common(full, rule, w, seed)
    m = full.m
    for i in range(full.n):
        if seed.row_size(i) == m - 1:
            raise PreconditionError(f"seed row {i} has exactly one free cell")
    if not is_necessary_winner(seed, rule, w):
        raise PreconditionError("the winner is not a necessary winner of the seed")
    cache = ScoreCache(seed, rule, backend)
    for i, k in seed.locked():
        if cache.is_null(i, k):
            # already freed as the partner cell of an earlier row repair
            continue
        cache.free(i, k)
        if cache.row_size(i) == m - 1:
            _ensure_irredundant(cache, seed, w, i, k)
        elif not cache.nw(w):
            cache.lock(i, k, seed[i, k])
    return Explanation("iAXp", cache.matrix(), w, rule, _stats(cache))


def _ensure_irredundant(cache: ScoreCache, seed: PartialRankMatrix, w: int, i: int, k: int) -> None:
    for k2 in range(cache.m):
        if k2 == k:
            continue
        cache.free(i, k2)
        if cache.nw(w):
            return
        cache.lock(i, k2, seed[i, k2])
    cache.lock(i, k, seed[i, k])


def _stats(cache: ScoreCache) -> dict:
    return {"nw_queries": cache.nw_queries, "mutations": cache.mutations, "work": cache.work}


def _freed(part: PartialRankMatrix, cells) -> PartialRankMatrix:
    null = part.m
    grid = [list(r) for r in part.cells]
    for i, k in cells:
        grid[i][k] = null
    return make_matrix(grid, part.names)


def _check_candidate(full: PartialRankMatrix, cand: PartialRankMatrix) -> None:
    if full.n != cand.n or full.m != cand.m:
        raise ValueError("dimension mismatch")
    if not is_extension(cand, full):
        raise ValueError("candidate explanation is not contained in the profile")


def verify_axp(full: PartialRankMatrix, rule: ScoringVector, w: int, cand: PartialRankMatrix) -> bool:
    """Necessary winner on ``cand`` and on no matrix with one cell fewer."""
    _check_candidate(full, cand)
    if not is_necessary_winner(cand, rule, w):
        return False
    return all(not is_necessary_winner(_freed(cand, [c]), rule, w) for c in cand.locked())


def is_irredundant_shape(part: PartialRankMatrix) -> bool:
    m = part.m
    return all(part.row_size(i) != m - 1 for i in range(part.n))


def verify_iaxp(full: PartialRankMatrix, rule: ScoringVector, w: int, cand: PartialRankMatrix) -> bool:
    """Subset-minimality among matrices whose rows have 0 or >= 2 free cells.

    By monotonicity it suffices to test the largest proper sub-matrices of
    that shape: one cell fewer in a row that already has free cells, or
    two cells fewer in a full row.
    """
    _check_candidate(full, cand)
    if not is_irredundant_shape(cand) or not is_necessary_winner(cand, rule, w):
        return False
    m = cand.m
    for i in range(cand.n):
        locked = [k for k in range(m) if not cand.is_null(i, k)]
        if len(locked) == m:
            drops = [[(i, a), (i, b)] for x, a in enumerate(locked) for b in locked[x + 1:]]
        else:
            drops = [[(i, a)] for a in locked]
        for cells in drops:
            if is_necessary_winner(_freed(cand, cells), rule, w):
                return False
    return True


def verify_cxp(full: PartialRankMatrix, rule: ScoringVector, w: int, cand: PartialRankMatrix) -> bool:
    """Freeing ``cand`` removes ``w`` from the necessary winners; freeing any
    proper subset obtained by restoring one cell does not."""
    _check_candidate(full, cand)
    if is_necessary_winner(complement(full, cand), rule, w):
        return False
    cells = list(cand.locked())
    for c in cells:
        rest = [x for x in cells if x != c]
        if not is_necessary_winner(complement(full, full.restrict(rest)), rule, w):
            return False
    return True
