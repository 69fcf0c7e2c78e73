"""Pure-Python kernels (fallback for the compiled ``_kernels`` extension).

Both modules expose the same names with the same semantics and counters:

``ScoreCache(cells, weights)``
    Incremental per-row minimum/maximum achievable scores.
``search(nvars, clauses, bound, lower)``
    DPLL with unit propagation and a cardinality bound on true variables.
"""

BACKEND = "python"


class ScoreCache:
    """Per-row min/max achievable scores, updated in O(m) per cell change.

    ``cells`` is a list of rows of candidate ids with ``m`` marking a free
    cell; ``weights`` is the non-increasing scoring vector.
    """

    def __init__(self, cells, weights):
        n = len(cells)
        m = len(weights)
        self.n = n
        self.m = m
        self.weights = list(weights)
        self.grid = [list(row) for row in cells]
        self.pos = [[-1] * m for _ in range(n)]
        self.row_min = [[0] * m for _ in range(n)]
        self.row_max = [[0] * m for _ in range(n)]
        self.smin = [0] * m
        self.smax = [0] * m
        self.nw_queries = 0
        self.mutations = 0
        self.work = 0
        for i in range(n):
            row = self.grid[i]
            if len(row) != m:
                raise ValueError("row length does not match the scoring vector")
            for k in range(m):
                c = row[k]
                if c != m:
                    if c < 0 or c > m or self.pos[i][c] != -1:
                        raise ValueError(f"row {i}: invalid or duplicate candidate {c}")
                    self.pos[i][c] = k
            self._refresh_row(i)
        self.work = 0

    def _refresh_row(self, i):
        m = self.m
        w = self.weights
        row = self.grid[i]
        lo = -1
        hi = -1
        for k in range(m):
            if row[k] == m:
                if lo < 0:
                    lo = k
                hi = k
        pos = self.pos[i]
        rmin = self.row_min[i]
        rmax = self.row_max[i]
        smin = self.smin
        smax = self.smax
        for c in range(m):
            p = pos[c]
            if p >= 0:
                a = b = w[p]
            else:
                a = w[hi]
                b = w[lo]
            smin[c] += a - rmin[c]
            smax[c] += b - rmax[c]
            rmin[c] = a
            rmax[c] = b
        self.work += 2 * m

    def lock(self, i, k, c):
        m = self.m
        if self.grid[i][k] != m:
            raise ValueError(f"cell ({i}, {k}) is already locked")
        if c < 0 or c >= m:
            raise ValueError(f"candidate id {c} out of range")
        if self.pos[i][c] != -1:
            raise ValueError(f"candidate {c} already locked in row {i}")
        self.grid[i][k] = c
        self.pos[i][c] = k
        self.mutations += 1
        self._refresh_row(i)

    def free(self, i, k):
        m = self.m
        c = self.grid[i][k]
        if c == m:
            raise ValueError(f"cell ({i}, {k}) is already free")
        self.grid[i][k] = m
        self.pos[i][c] = -1
        self.mutations += 1
        self._refresh_row(i)

    def get(self, i, k):
        return self.grid[i][k]

    def row_size(self, i):
        m = self.m
        return sum(1 for c in self.grid[i] if c != m)

    def nw(self, w):
        """Necessary-winner test: ``smin[w] >= smax[c]`` for every rival."""
        self.nw_queries += 1
        self.work += self.m
        sw = self.smin[w]
        smax = self.smax
        for c in range(self.m):
            if c != w and smax[c] > sw:
                return False
        return True

    def sigma_min(self, c):
        return self.smin[c]

    def sigma_max(self, c):
        return self.smax[c]

    def row_values(self, i):
        return list(self.row_min[i]), list(self.row_max[i])

    def cells(self):
        return [list(row) for row in self.grid]


def search(nvars, clauses, bound=-1, lower=0, min_true=0, start=None):
    """Lexicographically first model with the fewest true variables.

    Variables are ``1..nvars`` and clauses are lists of non-zero signed
    literals.  Decisions follow variable order, ``False`` first.  With
    ``bound < 0`` the first model found is returned (no minimisation);
    otherwise only models with at most ``bound`` true variables are
    accepted and the bound tightens on every improvement.  ``lower`` is a
    known lower bound on the optimum: the search stops once it is met.
    ``min_true`` is a hard floor: models with fewer true variables are
    rejected.

    ``start`` (first-model mode only) is a model returned by an earlier
    call on a subset of ``clauses``.  Adding clauses only removes models,
    so no model is lexicographically smaller than ``start`` and the search
    skips that region.

    Returns ``(model, nodes)`` where ``model`` is a list of 0/1 values
    (index ``v - 1``) or ``None`` when no model exists within the bound.
    """
    s = _Search(nvars, clauses)
    minimise = bound >= 0
    if start is not None:
        if minimise:
            raise ValueError("start only applies to first-model search")
        if len(start) != nvars:
            raise ValueError("start must assign every variable")
    s.start = None if start is None else [int(x) for x in start]
    s.bound = bound if minimise else nvars
    s.lower = lower
    s.minimise = minimise
    s.min_true = min_true
    if not s.ok or min_true > nvars:
        return None, 0
    s.dfs(1 if start is not None else -1)
    return s.best, s.nodes


class _Search:
    def __init__(self, nvars, clauses):
        self.nvars = nvars
        self.lits = []
        self.occ = [[] for _ in range(2 * nvars + 2)]
        self.ok = True
        for cl in clauses:
            if not cl:
                self.ok = False
                continue
            idx = len(self.lits)
            lits = [int(l) for l in cl]
            for l in lits:
                if l == 0 or abs(l) > nvars:
                    raise ValueError(f"literal {l} out of range")
                self.occ[self._code(l)].append(idx)
            self.lits.append(lits)
        nc = len(self.lits)
        self.nsat = [0] * nc
        self.nfalse = [0] * nc
        self.assign = [-1] * (nvars + 1)
        self.trail = []
        self.units = []
        self.count_true = 0
        self.conflict = False
        self.best = None
        self.start = None
        self.nodes = 0
        for idx, lits in enumerate(self.lits):
            if len(lits) == 1:
                self.units.append(idx)

    @staticmethod
    def _code(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _set(self, v, val):
        self.assign[v] = val
        self.trail.append(v)
        if val:
            self.count_true += 1
            true_code, false_code = 2 * v, 2 * v + 1
        else:
            true_code, false_code = 2 * v + 1, 2 * v
        nsat = self.nsat
        nfalse = self.nfalse
        for c in self.occ[true_code]:
            nsat[c] += 1
        lits = self.lits
        for c in self.occ[false_code]:
            nfalse[c] += 1
            if nsat[c] == 0:
                size = len(lits[c])
                if nfalse[c] == size:
                    self.conflict = True
                elif nfalse[c] == size - 1:
                    self.units.append(c)

    def _undo(self, mark):
        nsat = self.nsat
        nfalse = self.nfalse
        while len(self.trail) > mark:
            v = self.trail.pop()
            val = self.assign[v]
            self.assign[v] = -1
            if val:
                self.count_true -= 1
                true_code, false_code = 2 * v, 2 * v + 1
            else:
                true_code, false_code = 2 * v + 1, 2 * v
            for c in self.occ[true_code]:
                nsat[c] -= 1
            for c in self.occ[false_code]:
                nfalse[c] -= 1
        self.conflict = False
        self.units.clear()

    def _propagate(self):
        assign = self.assign
        while self.units and not self.conflict:
            c = self.units.pop()
            if self.nsat[c]:
                continue
            for l in self.lits[c]:
                if assign[abs(l)] < 0:
                    self._set(abs(l), 1 if l > 0 else 0)
                    break
            else:
                self.conflict = True
        self.units.clear()
        return not self.conflict

    def _lower_bound(self):
        # greedy packing of variable-disjoint clauses that need one more true
        assign = self.assign
        used = set()
        lb = 0
        for c, lits in enumerate(self.lits):
            if self.nsat[c]:
                continue
            free = []
            for l in lits:
                v = abs(l)
                if assign[v] < 0:
                    if l < 0:
                        break
                    free.append(v)
            else:
                if not any(v in used for v in free):
                    used.update(free)
                    lb += 1
        return lb

    def dfs(self, tight=-1):
        """Return True when the search may stop (optimum reached).

        ``tight >= 1`` means variables ``1..tight-1`` agree with ``start``.
        """
        self.nodes += 1
        if not self._propagate():
            return False
        lb = self._lower_bound()
        short = self.min_true - self.count_true
        if self.count_true + max(lb, short) > self.bound:
            return False
        if short > self.nvars - len(self.trail):
            return False
        if lb == 0 and short <= 0:
            model = [1 if self.assign[v] == 1 else 0 for v in range(1, self.nvars + 1)]
            self.best = model
            if not self.minimise:
                return True
            self.bound = self.count_true - 1
            return self.count_true <= self.lower
        v = 1
        while self.assign[v] >= 0:
            v += 1
        if tight > 0:
            start = self.start
            for u in range(tight, v):
                if self.assign[u] != start[u - 1]:
                    if self.assign[u] < start[u - 1]:
                        return False  # every model below is smaller than start
                    tight = -1
                    break
        for val in (0, 1):
            child = -1
            if tight > 0:
                if val < self.start[v - 1]:
                    continue
                if val == self.start[v - 1]:
                    child = v + 1
            mark = len(self.trail)
            self._set(v, val)
            stop = self.dfs(child)
            self._undo(mark)
            if stop:
                return True
        return False
