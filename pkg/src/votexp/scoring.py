"""Scoring rules, achievable-score bounds and the necessary-winner test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .core import PartialRankMatrix, ProfileError


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class ScoringVector:
    """Integer weights ``(w1, ..., wm)``, non-increasing and non-constant."""

    weights: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not ws:
            raise RuleError("empty scoring vector")
        if any(a < b for a, b in zip(ws, ws[1:])):
            raise RuleError(f"scoring vector must be non-increasing: {ws}")
        if ws[0] == ws[-1]:
            raise RuleError("constant scoring vectors define a constant rule")
        if not self.label:
            object.__setattr__(self, "label", "vector:" + ",".join(map(str, ws)))

    @property
    def m(self) -> int:
        return len(self.weights)

    def __getitem__(self, k: int) -> int:
        return self.weights[k]

    @classmethod
    def borda(cls, m: int) -> "ScoringVector":
        return cls(tuple(range(m - 1, -1, -1)), "borda")

    @classmethod
    def k_approval(cls, m: int, k: int) -> "ScoringVector":
        if not 1 <= k < m:
            raise RuleError(f"k-approval needs 1 <= k < m (k={k}, m={m})")
        label = "plurality" if k == 1 else f"kapproval:{k}"
        return cls((1,) * k + (0,) * (m - k), label)

    @classmethod
    def plurality(cls, m: int) -> "ScoringVector":
        return cls.k_approval(m, 1)


def parse_rule(spec: str, m: int) -> ScoringVector:
    """``borda``, ``plurality``, ``kapproval:K`` or ``vector:w1,...,wm``."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    kind = kind.lower()
    if kind == "borda" and not arg:
        return ScoringVector.borda(m)
    if kind == "plurality" and not arg:
        return ScoringVector.plurality(m)
    if kind == "kapproval":
        try:
            k = int(arg)
        except ValueError:
            raise RuleError(f"bad k in rule {spec!r}") from None
        return ScoringVector.k_approval(m, k)
    if kind == "vector":
        try:
            ws = tuple(int(x) for x in arg.split(","))
        except ValueError:
            raise RuleError(f"bad weights in rule {spec!r}") from None
        if len(ws) != m:
            raise RuleError(f"rule has {len(ws)} weights but the profile has {m} candidates")
        return ScoringVector(ws)
    raise RuleError(f"unknown rule {spec!r}")


def _check_rule(part: PartialRankMatrix, rule: ScoringVector) -> None:
    if rule.m != part.m:
        raise RuleError(f"rule has {rule.m} weights but the profile has {part.m} candidates")


def score(full: PartialRankMatrix, rule: ScoringVector, c: int) -> int:
    if not full.is_complete:
        raise ProfileError("score needs a complete profile")
    _check_rule(full, rule)
    return sum(rule[row.index(c)] for row in full.cells)


def scores(full: PartialRankMatrix, rule: ScoringVector) -> list[int]:
    if not full.is_complete:
        raise ProfileError("scores need a complete profile")
    _check_rule(full, rule)
    out = [0] * full.m
    for row in full.cells:
        for k, c in enumerate(row):
            out[c] += rule[k]
    return out


def winners(full: PartialRankMatrix, rule: ScoringVector) -> set[int]:
    """Co-winners (no tie-breaking)."""
    s = scores(full, rule)
    best = max(s)
    return {c for c, v in enumerate(s) if v == best}


def row_bounds(row: Sequence[int], rule: ScoringVector, c: int) -> tuple[int, int]:
    """Min and max score ``c`` can get from one (partial) ballot."""
    m = rule.m
    if c in row:
        v = rule[row.index(c)]
        return v, v
    free = [k for k, x in enumerate(row) if x == m]
    return rule[free[-1]], rule[free[0]]


def sigma_min(part: PartialRankMatrix, rule: ScoringVector, c: int) -> int:
    """Lowest total score of ``c`` over all completions of ``part``."""
    _check_rule(part, rule)
    return sum(row_bounds(row, rule, c)[0] for row in part.cells)


def sigma_max(part: PartialRankMatrix, rule: ScoringVector, c: int) -> int:
    """Highest total score of ``c`` over all completions of ``part``."""
    _check_rule(part, rule)
    return sum(row_bounds(row, rule, c)[1] for row in part.cells)


def is_necessary_winner(part: PartialRankMatrix, rule: ScoringVector, w: int) -> bool:
    """True iff ``w`` is a (co-)winner of every completion of ``part``.

    For rank matrices the minimum score of ``w`` and the maximum score of a
    rival can be reached in the same completion, so comparing the bounds
    candidate by candidate is exact.
    """
    smin = sigma_min(part, rule, w)
    return all(sigma_max(part, rule, c) <= smin for c in range(part.m) if c != w)


@dataclass(frozen=True)
class MarginReport:
    winner: int
    margins: dict[int, int]  # rival -> sigma_min(w) - sigma_max(rival)

    @property
    def total(self) -> int:
        return sum(self.margins.values())

    @property
    def necessary(self) -> bool:
        return all(d >= 0 for d in self.margins.values())


def total_margin(part: PartialRankMatrix, rule: ScoringVector, w: int) -> MarginReport:
    """Per-rival margins ``sigma_min(w) - sigma_max(c)`` and their sum.

    ``necessary`` (every margin non-negative) is the necessary-winner test;
    a non-negative total alone does not imply it.
    """
    smin = sigma_min(part, rule, w)
    return MarginReport(w, {c: smin - sigma_max(part, rule, c) for c in range(part.m) if c != w})


def row_total_margin(row: Sequence[int], rule: ScoringVector, w: int) -> int:
    lo = row_bounds(row, rule, w)[0]
    return sum(lo - row_bounds(row, rule, c)[1] for c in range(rule.m) if c != w)


class ScoreCache:
    """Mutable working copy of a partial matrix with incremental score bounds.

    Locking or freeing a cell refreshes only the affected row (O(m)); the
    necessary-winner query compares cached totals (O(m)).  ``nw_queries``,
    ``mutations`` and ``work`` count operations for complexity checks.
    """

    def __init__(self, part: PartialRankMatrix, rule: ScoringVector, backend: str | None = None):
        _check_rule(part, rule)
        impl = kernels if backend is None else kernels.get_backend(backend)
        self.names = part.names
        self.rule = rule
        self._k = impl.ScoreCache([list(r) for r in part.cells], list(rule.weights))

    n = property(lambda self: self._k.n)
    m = property(lambda self: self._k.m)
    nw_queries = property(lambda self: self._k.nw_queries)
    mutations = property(lambda self: self._k.mutations)
    work = property(lambda self: self._k.work)

    def lock(self, i: int, k: int, c: int) -> None:
        self._k.lock(i, k, c)

    def free(self, i: int, k: int) -> None:
        self._k.free(i, k)

    def get(self, i: int, k: int) -> int:
        return self._k.get(i, k)

    def is_null(self, i: int, k: int) -> bool:
        return self._k.get(i, k) == self._k.m

    def row_size(self, i: int) -> int:
        return self._k.row_size(i)

    def nw(self, w: int) -> bool:
        return self._k.nw(w)

    def sigma_min(self, c: int) -> int:
        return self._k.sigma_min(c)

    def sigma_max(self, c: int) -> int:
        return self._k.sigma_max(c)

    def row_values(self, i: int) -> tuple[list[int], list[int]]:
        return self._k.row_values(i)

    def matrix(self) -> PartialRankMatrix:
        from .core import make_matrix

        return make_matrix(self._k.cells(), self.names)


def cache_build(part: PartialRankMatrix, rule: ScoringVector, backend: str | None = None) -> ScoreCache:
    return ScoreCache(part, rule, backend)


def cache_lock(cache: ScoreCache, cell: tuple[int, int], candidate: int) -> None:
    cache.lock(cell[0], cell[1], candidate)


def cache_free(cache: ScoreCache, cell: tuple[int, int]) -> None:
    cache.free(cell[0], cell[1])


def cache_nw(cache: ScoreCache, w: int) -> bool:
    return cache.nw(w)
