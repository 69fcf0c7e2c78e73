"""Seed maps: CNF over one Boolean variable per profile cell.

Variable ``(i, j)`` is ``i * m + j + 1``.  In the default polarity a true
variable means the cell is locked; with ``freed=True`` it means the cell
is freed (used by the smallest-CXp search).  Both polarities carry the
irredundancy clauses forbidding rows with exactly one free cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import kernels


@dataclass(frozen=True)
class Model:
    values: tuple[int, ...]
    n: int
    m: int

    @property
    def weight(self) -> int:
        return sum(self.values)

    def is_true(self, i: int, j: int) -> bool:
        return bool(self.values[i * self.m + j])

    def true_cells(self) -> list[tuple[int, int]]:
        return [divmod(v, self.m) for v, x in enumerate(self.values) if x]

    def false_cells(self) -> list[tuple[int, int]]:
        return [divmod(v, self.m) for v, x in enumerate(self.values) if not x]


class SeedCnf:
    def __init__(self, n: int, m: int, freed: bool = False, backend: str | None = None):
        if n < 1 or m < 1:
            raise ValueError("seed map needs n, m >= 1")
        self.n = n
        self.m = m
        self.freed = freed
        self.clauses: list[list[int]] = []
        self._kernels = kernels if backend is None else kernels.get_backend(backend)
        self._floor = 0  # optimum never decreases as clauses are added
        self._last = None  # first model never moves backwards either
        self.nodes = 0
        sign = -1 if freed else 1
        for i in range(n):
            for j0 in range(m):
                clause = [sign * self.var(i, j0)]
                clause += [-sign * self.var(i, j) for j in range(m) if j != j0]
                self.clauses.append(clause)

    @property
    def nvars(self) -> int:
        return self.n * self.m

    def var(self, i: int, j: int) -> int:
        if not (0 <= i < self.n and 0 <= j < self.m):
            raise IndexError(f"cell ({i}, {j}) out of range")
        return i * self.m + j + 1

    def add_clause(self, lits: Iterable[int]) -> None:
        lits = [int(l) for l in lits]
        if not lits:
            raise ValueError("empty clause")
        for l in lits:
            if l == 0 or abs(l) > self.nvars:
                raise ValueError(f"literal {l} out of range")
        self.clauses.append(lits)

    def add_blocking_up(self, cells: Iterable[tuple[int, int]]) -> None:
        """Exclude every assignment making all of ``cells`` true."""
        cells = list(cells)
        if not cells:
            raise ValueError("blocking an empty cell set would empty the map")
        self.add_clause(-self.var(i, j) for i, j in cells)

    def add_blocking_down(self, cells: Iterable[tuple[int, int]]) -> None:
        """Exclude every assignment making all of ``cells`` false."""
        cells = list(cells)
        if not cells:
            raise ValueError("blocking an empty cell set would empty the map")
        self.add_clause(self.var(i, j) for i, j in cells)

    def solve(self) -> Model | None:
        """Lexicographically first model (decisions false-first), or None.

        Clauses are only ever added, so each call resumes the search from
        the previous answer instead of the all-false assignment.
        """
        values, nodes = self._kernels.search(self.nvars, self.clauses, start=self._last)
        self.nodes += nodes
        if values is None:
            return None
        self._last = values
        return Model(tuple(values), self.n, self.m)

    def minimum_model(self, min_true: int = 0) -> Model | None:
        """A model with the fewest true variables, lexicographically first among them.

        ``min_true`` rejects models with fewer true variables; callers use
        it for a cardinality floor known to hold for the wanted models.
        """
        floor = max(self._floor, min_true)
        values, nodes = self._kernels.search(self.nvars, self.clauses, self.nvars, floor, min_true)
        self.nodes += nodes
        if values is None:
            return None
        model = Model(tuple(values), self.n, self.m)
        if min_true == 0:
            self._floor = model.weight
        return model

    def minimum_model_milp(self, min_true: int = 0) -> Model | None:
        """A model with the fewest true variables, solved as a 0/1 program.

        Same optimum as :meth:`minimum_model` but without the lexicographic
        tie-break: the solver picks any optimal model.  Much faster once
        the optimum is large and the clauses are short.
        """
        nv = self.nvars
        rows = np.zeros((len(self.clauses) + 1, nv))
        lo = np.empty(len(self.clauses) + 1)
        for r, cl in enumerate(self.clauses):
            negs = 0
            for l in cl:
                if l > 0:
                    rows[r, l - 1] += 1
                else:
                    rows[r, -l - 1] -= 1
                    negs += 1
            lo[r] = 1 - negs  # sum(pos) + sum(1 - neg) >= 1
        rows[-1, :] = 1
        lo[-1] = max(self._floor, min_true)
        res = milp(
            np.ones(nv),
            constraints=LinearConstraint(rows, lo, np.inf),
            integrality=np.ones(nv),
            bounds=Bounds(0, 1),
        )
        if res.status == 2:
            return None
        if res.x is None:
            raise RuntimeError(f"0/1 solver failed: {res.message}")
        values = tuple(int(round(v)) for v in res.x)
        model = Model(values, self.n, self.m)
        if min_true == 0:
            self._floor = model.weight
        return model

    def satisfies(self, values) -> bool:
        return all(any((values[abs(l) - 1] == 1) == (l > 0) for l in cl) for cl in self.clauses)

    def dump(self) -> str:
        """DIMACS text of the current map."""
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"
