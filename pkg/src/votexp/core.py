"""Rank matrices, partial rank matrices and the profile text format.

A profile is an ``n x m`` grid: row ``i`` is voter ``i``'s ballot, column ``k``
is position ``k`` (0 = most preferred).  Candidates are dense integer ids
``0..m-1``; a free cell holds the sentinel id ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class ProfileError(ValueError):
    """Malformed profile text or an invalid matrix."""


@dataclass(frozen=True)
class Candidate:
    id: int
    name: str


@dataclass(frozen=True, order=True)
class CellIndex:
    voter: int
    position: int


def default_names(m: int) -> tuple[str, ...]:
    """``A, B, ..., Z, C26, C27, ...``"""
    return tuple(chr(ord("A") + k) if k < 26 else f"C{k}" for k in range(m))


@dataclass(frozen=True)
class PartialRankMatrix:
    """An ``n x m`` grid of candidate ids, ``m`` marking a free cell.

    Instances are immutable; use :meth:`with_cells` or the mutation
    methods of :class:`votexp.scoring.ScoreCache` to derive new ones.
    """

    cells: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.cells:
            raise ProfileError("a profile needs at least one voter")
        m = len(self.cells[0])
        if m < 1:
            raise ProfileError("a profile needs at least one candidate")
        cells = tuple(tuple(int(c) for c in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if not self.names:
            object.__setattr__(self, "names", default_names(m))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != m:
            raise ProfileError(f"expected {m} candidate names, got {len(self.names)}")
        if len(set(self.names)) != m:
            raise ProfileError("candidate names must be unique")
        for i, row in enumerate(cells):
            if len(row) != m:
                raise ProfileError(f"row {i} has length {len(row)}, expected {m}")
            seen = set()
            for c in row:
                if c < 0 or c > m:
                    raise ProfileError(f"row {i}: candidate id {c} out of range")
                if c == m:
                    continue
                if c in seen:
                    raise ProfileError(f"row {i}: candidate {self.names[c]} appears twice")
                seen.add(c)

    @property
    def n(self) -> int:
        return len(self.cells)

    @property
    def m(self) -> int:
        return len(self.cells[0])

    @property
    def null(self) -> int:
        return self.m

    @property
    def size(self) -> int:
        return size(self)

    @property
    def is_complete(self) -> bool:
        return all(c != self.m for row in self.cells for c in row)

    def __getitem__(self, index) -> int:
        i, k = index
        return self.cells[i][k]

    def is_null(self, i: int, k: int) -> bool:
        return self.cells[i][k] == self.m

    def locked(self) -> Iterator[tuple[int, int]]:
        """Locked cells in row-major order."""
        m = self.m
        for i, row in enumerate(self.cells):
            for k, c in enumerate(row):
                if c != m:
                    yield i, k

    def row_size(self, i: int) -> int:
        return sum(1 for c in self.cells[i] if c != self.m)

    def candidates(self) -> list[Candidate]:
        return [Candidate(k, name) for k, name in enumerate(self.names)]

    def candidate_id(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ProfileError(f"unknown candidate {name!r}") from None

    def with_cells(self, cells: Iterable[Sequence[int]]) -> "PartialRankMatrix":
        return make_matrix(cells, self.names)

    def restrict(self, keep: Iterable[tuple[int, int]]) -> "PartialRankMatrix":
        """The partial matrix locking only ``keep`` (cells taken from self)."""
        m = self.m
        grid = [[m] * m for _ in range(self.n)]
        for i, k in keep:
            if self.cells[i][k] == m:
                raise ProfileError(f"cell ({i}, {k}) is free in the source matrix")
            grid[i][k] = self.cells[i][k]
        return PartialRankMatrix(tuple(map(tuple, grid)), self.names)

    def empty(self) -> "PartialRankMatrix":
        return PartialRankMatrix(tuple((self.m,) * self.m for _ in range(self.n)), self.names)

    def cellset(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.locked())

    def __str__(self) -> str:
        return serialize(self)


class RankMatrix(PartialRankMatrix):
    """A complete profile: every row is a permutation of ``0..m-1``."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_complete:
            raise ProfileError("a rank matrix may not contain free cells")


def make_matrix(cells: Iterable[Sequence[int]], names: Sequence[str] = ()) -> PartialRankMatrix:
    """Build a :class:`RankMatrix` when complete, else a :class:`PartialRankMatrix`."""
    cells = tuple(tuple(row) for row in cells)
    part = PartialRankMatrix(cells, tuple(names))
    if part.is_complete:
        return RankMatrix(part.cells, part.names)
    return part


def from_names(rows: Sequence[Sequence[str]], names: Sequence[str] | None = None) -> PartialRankMatrix:
    """Build a matrix from rows of names, ``'-'``/``None`` meaning free.

    >>> from_names(["AB", "BA"]).cells
    ((0, 1), (1, 0))
    """
    rows = [list(r) for r in rows]
    if names is None:
        names = default_names(len(rows[0]))
    index = {name: k for k, name in enumerate(names)}
    m = len(names)
    cells = []
    for row in rows:
        out = []
        for tok in row:
            if tok is None or tok in ("-", "."):
                out.append(m)
            elif tok in index:
                out.append(index[tok])
            else:
                raise ProfileError(f"unknown candidate token {tok!r}")
        cells.append(out)
    return make_matrix(cells, names)


def parse_profile(text: str) -> PartialRankMatrix:
    """Parse the profile text format.

    Line 1 holds ``n m``, line 2 the ``m`` candidate names, then ``n``
    ballot lines of ``m`` tokens each (a name or ``-`` for a free cell).
    Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines:
        raise ProfileError("empty profile")
    header = lines[0]
    if len(header) != 2:
        raise ProfileError("header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ProfileError("header must be two integers") from None
    if n < 1 or m < 1:
        raise ProfileError("n and m must be positive")
    if len(lines) < 2:
        raise ProfileError("missing candidate names line")
    names = lines[1]
    if len(names) != m:
        raise ProfileError(f"expected {m} candidate names, got {len(names)}")
    if "-" in names:
        raise ProfileError("'-' is reserved for free cells")
    ballots = lines[2:]
    if len(ballots) != n:
        raise ProfileError(f"expected {n} ballots, got {len(ballots)}")
    for i, row in enumerate(ballots):
        if len(row) != m:
            raise ProfileError(f"ballot {i + 1} has {len(row)} tokens, expected {m}")
    return from_names(ballots, names)


def serialize(part: PartialRankMatrix) -> str:
    lines = [f"{part.n} {part.m}", " ".join(part.names)]
    for row in part.cells:
        lines.append(" ".join("-" if c == part.m else part.names[c] for c in row))
    return "\n".join(lines) + "\n"


def read_profile(path) -> PartialRankMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())


def write_profile(part: PartialRankMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(part))


def _check_dims(a: PartialRankMatrix, b: PartialRankMatrix) -> None:
    if a.n != b.n or a.m != b.m:
        raise ProfileError(f"dimension mismatch: {a.n}x{a.m} vs {b.n}x{b.m}")


def is_extension(base: PartialRankMatrix, ext: PartialRankMatrix) -> bool:
    """True iff every locked cell of ``base`` holds the same candidate in ``ext``."""
    _check_dims(base, ext)
    null = base.m
    for rb, re_ in zip(base.cells, ext.cells):
        for cb, ce in zip(rb, re_):
            if cb != null and cb != ce:
                return False
    return True


def complement(full: PartialRankMatrix, part: PartialRankMatrix) -> PartialRankMatrix:
    """Free the cells locked in ``part`` and keep every other cell of ``full``."""
    if not is_extension(part, full):
        raise ProfileError("complement requires part to be contained in full")
    null = full.m
    cells = tuple(
        tuple(null if cp != null else cf for cf, cp in zip(rf, rp))
        for rf, rp in zip(full.cells, part.cells)
    )
    return make_matrix(cells, full.names)


def size(part: PartialRankMatrix) -> int:
    """Number of locked (non-null) cells."""
    null = part.m
    return sum(1 for row in part.cells for c in row if c != null)
