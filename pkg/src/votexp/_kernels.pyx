# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same interface and counters as ``_kernels_py``."""

from libc.stdlib cimport malloc, calloc, free

BACKEND = "cython"


cdef class ScoreCache:
    cdef public int n, m
    cdef public long long nw_queries, mutations, work
    cdef int *w
    cdef int *grid
    cdef int *pos
    cdef long long *rmin
    cdef long long *rmax
    cdef long long *smin
    cdef long long *smax

    def __cinit__(self, cells, weights):
        cdef int n = len(cells)
        cdef int m = len(weights)
        self.n = n
        self.m = m
        self.w = <int *> malloc(m * sizeof(int))
        self.grid = <int *> malloc(n * m * sizeof(int))
        self.pos = <int *> malloc(n * m * sizeof(int))
        self.rmin = <long long *> calloc(n * m, sizeof(long long))
        self.rmax = <long long *> calloc(n * m, sizeof(long long))
        self.smin = <long long *> calloc(m, sizeof(long long))
        self.smax = <long long *> calloc(m, sizeof(long long))
        if (not self.w or not self.grid or not self.pos or not self.rmin
                or not self.rmax or not self.smin or not self.smax):
            raise MemoryError()

    def __init__(self, cells, weights):
        cdef int n = self.n, m = self.m, i, k, c
        for k in range(m):
            self.w[k] = weights[k]
        for i in range(n * m):
            self.pos[i] = -1
        self.nw_queries = 0
        self.mutations = 0
        for i in range(n):
            row = cells[i]
            if len(row) != m:
                raise ValueError("row length does not match the scoring vector")
            for k in range(m):
                c = row[k]
                self.grid[i * m + k] = c
                if c != m:
                    if c < 0 or c > m or self.pos[i * m + c] != -1:
                        raise ValueError(f"row {i}: invalid or duplicate candidate {c}")
                    self.pos[i * m + c] = k
            self._refresh_row(i)
        self.work = 0

    def __dealloc__(self):
        free(self.w)
        free(self.grid)
        free(self.pos)
        free(self.rmin)
        free(self.rmax)
        free(self.smin)
        free(self.smax)

    cdef void _refresh_row(self, int i):
        cdef int m = self.m, k, c, p, lo = -1, hi = -1
        cdef int *row = self.grid + i * m
        cdef int *pos = self.pos + i * m
        cdef long long *rmin = self.rmin + i * m
        cdef long long *rmax = self.rmax + i * m
        cdef long long a, b
        for k in range(m):
            if row[k] == m:
                if lo < 0:
                    lo = k
                hi = k
        for c in range(m):
            p = pos[c]
            if p >= 0:
                a = self.w[p]
                b = a
            else:
                a = self.w[hi]
                b = self.w[lo]
            self.smin[c] += a - rmin[c]
            self.smax[c] += b - rmax[c]
            rmin[c] = a
            rmax[c] = b
        self.work += 2 * m

    def lock(self, int i, int k, int c):
        cdef int m = self.m
        if i < 0 or i >= self.n or k < 0 or k >= m:
            raise IndexError("cell out of range")
        if self.grid[i * m + k] != m:
            raise ValueError(f"cell ({i}, {k}) is already locked")
        if c < 0 or c >= m:
            raise ValueError(f"candidate id {c} out of range")
        if self.pos[i * m + c] != -1:
            raise ValueError(f"candidate {c} already locked in row {i}")
        self.grid[i * m + k] = c
        self.pos[i * m + c] = k
        self.mutations += 1
        self._refresh_row(i)

    def free(self, int i, int k):
        cdef int m = self.m, c
        if i < 0 or i >= self.n or k < 0 or k >= m:
            raise IndexError("cell out of range")
        c = self.grid[i * m + k]
        if c == m:
            raise ValueError(f"cell ({i}, {k}) is already free")
        self.grid[i * m + k] = m
        self.pos[i * m + c] = -1
        self.mutations += 1
        self._refresh_row(i)

    def get(self, int i, int k):
        return self.grid[i * self.m + k]

    def row_size(self, int i):
        cdef int k, s = 0
        for k in range(self.m):
            if self.grid[i * self.m + k] != self.m:
                s += 1
        return s

    cpdef bint nw(self, int w):
        cdef int c
        cdef long long sw = self.smin[w]
        self.nw_queries += 1
        self.work += self.m
        for c in range(self.m):
            if c != w and self.smax[c] > sw:
                return False
        return True

    def sigma_min(self, int c):
        return self.smin[c]

    def sigma_max(self, int c):
        return self.smax[c]

    def row_values(self, int i):
        cdef int c
        return ([self.rmin[i * self.m + c] for c in range(self.m)],
                [self.rmax[i * self.m + c] for c in range(self.m)])

    def cells(self):
        cdef int i, k
        return [[self.grid[i * self.m + k] for k in range(self.m)] for i in range(self.n)]


cdef class _Search:
    cdef int nvars, nclauses, nlits, bound, lower, min_true, count_true, trail_len, nunits
    cdef bint minimise, conflict, found
    cdef long long nodes
    cdef int *lits        # flattened literals
    cdef int *cstart      # clause c spans lits[cstart[c]:cstart[c+1]]
    cdef int *occ         # flattened occurrence lists by literal code
    cdef int *ostart
    cdef int *nsat
    cdef int *nfalse
    cdef signed char *assign
    cdef int *trail
    cdef int *units
    cdef signed char *best
    cdef char *used
    cdef signed char *start  # previous model (1-based), or NULL

    def __cinit__(self):
        self.lits = NULL
        self.cstart = NULL
        self.occ = NULL
        self.ostart = NULL
        self.nsat = NULL
        self.nfalse = NULL
        self.assign = NULL
        self.trail = NULL
        self.units = NULL
        self.best = NULL
        self.used = NULL
        self.start = NULL

    def __dealloc__(self):
        free(self.lits)
        free(self.cstart)
        free(self.occ)
        free(self.ostart)
        free(self.nsat)
        free(self.nfalse)
        free(self.assign)
        free(self.trail)
        free(self.units)
        free(self.best)
        free(self.used)
        free(self.start)

    cdef int setup(self, int nvars, list clauses) except -1:
        cdef int nc = len(clauses), total = 0, c, j, l, code, ncodes = 2 * nvars + 2
        cdef int *fill
        cdef list cl
        self.nvars = nvars
        self.nclauses = nc
        for cl in clauses:
            total += len(cl)
        self.nlits = total
        self.lits = <int *> malloc((total + 1) * sizeof(int))
        self.cstart = <int *> malloc((nc + 1) * sizeof(int))
        self.ostart = <int *> calloc(ncodes + 1, sizeof(int))
        self.occ = <int *> malloc((total + 1) * sizeof(int))
        self.nsat = <int *> calloc(nc + 1, sizeof(int))
        self.nfalse = <int *> calloc(nc + 1, sizeof(int))
        self.assign = <signed char *> malloc((nvars + 1) * sizeof(signed char))
        self.trail = <int *> malloc((nvars + 1) * sizeof(int))
        self.units = <int *> malloc((total + nc + 1) * sizeof(int))
        self.best = <signed char *> calloc(nvars + 1, sizeof(signed char))
        self.used = <char *> calloc(nvars + 1, sizeof(char))
        if (not self.lits or not self.cstart or not self.ostart or not self.occ
                or not self.nsat or not self.nfalse or not self.assign
                or not self.trail or not self.units or not self.best or not self.used):
            raise MemoryError()
        for j in range(nvars + 1):
            self.assign[j] = -1
        j = 0
        for c in range(nc):
            cl = clauses[c]
            self.cstart[c] = j
            for l in cl:
                if l == 0 or l > nvars or -l > nvars:
                    raise ValueError(f"literal {l} out of range")
                self.lits[j] = l
                code = 2 * l if l > 0 else -2 * l + 1
                self.ostart[code + 1] += 1
                j += 1
        self.cstart[nc] = j
        for code in range(ncodes):
            self.ostart[code + 1] += self.ostart[code]
        fill = <int *> calloc(ncodes + 1, sizeof(int))
        if not fill:
            raise MemoryError()
        for c in range(nc):
            for j in range(self.cstart[c], self.cstart[c + 1]):
                l = self.lits[j]
                code = 2 * l if l > 0 else -2 * l + 1
                self.occ[self.ostart[code] + fill[code]] = c
                fill[code] += 1
        free(fill)
        self.trail_len = 0
        self.nunits = 0
        self.count_true = 0
        self.conflict = False
        self.found = False
        self.nodes = 0
        for c in range(nc):
            if self.cstart[c + 1] - self.cstart[c] == 1:
                self.units[self.nunits] = c
                self.nunits += 1
        return 0

    cdef void _set(self, int v, int val):
        cdef int tc, fc, j, c, size
        self.assign[v] = val
        self.trail[self.trail_len] = v
        self.trail_len += 1
        if val:
            self.count_true += 1
            tc = 2 * v
            fc = 2 * v + 1
        else:
            tc = 2 * v + 1
            fc = 2 * v
        for j in range(self.ostart[tc], self.ostart[tc + 1]):
            self.nsat[self.occ[j]] += 1
        for j in range(self.ostart[fc], self.ostart[fc + 1]):
            c = self.occ[j]
            self.nfalse[c] += 1
            if self.nsat[c] == 0:
                size = self.cstart[c + 1] - self.cstart[c]
                if self.nfalse[c] == size:
                    self.conflict = True
                elif self.nfalse[c] == size - 1:
                    self.units[self.nunits] = c
                    self.nunits += 1

    cdef void _undo(self, int mark):
        cdef int v, val, tc, fc, j
        while self.trail_len > mark:
            self.trail_len -= 1
            v = self.trail[self.trail_len]
            val = self.assign[v]
            self.assign[v] = -1
            if val:
                self.count_true -= 1
                tc = 2 * v
                fc = 2 * v + 1
            else:
                tc = 2 * v + 1
                fc = 2 * v
            for j in range(self.ostart[tc], self.ostart[tc + 1]):
                self.nsat[self.occ[j]] -= 1
            for j in range(self.ostart[fc], self.ostart[fc + 1]):
                self.nfalse[self.occ[j]] -= 1
        self.conflict = False
        self.nunits = 0

    cdef bint _propagate(self):
        cdef int c, j, l, v
        cdef bint assigned
        while self.nunits > 0 and not self.conflict:
            self.nunits -= 1
            c = self.units[self.nunits]
            if self.nsat[c]:
                continue
            assigned = False
            for j in range(self.cstart[c], self.cstart[c + 1]):
                l = self.lits[j]
                v = l if l > 0 else -l
                if self.assign[v] < 0:
                    self._set(v, 1 if l > 0 else 0)
                    assigned = True
                    break
            if not assigned:
                self.conflict = True
        self.nunits = 0
        return not self.conflict

    cdef int _lower_bound(self):
        cdef int c, j, l, v, lb = 0
        cdef bint needs, clash
        for v in range(self.nvars + 1):
            self.used[v] = 0
        for c in range(self.nclauses):
            if self.nsat[c]:
                continue
            needs = True
            clash = False
            for j in range(self.cstart[c], self.cstart[c + 1]):
                l = self.lits[j]
                v = l if l > 0 else -l
                if self.assign[v] < 0:
                    if l < 0:
                        needs = False
                        break
                    if self.used[v]:
                        clash = True
            if needs and not clash:
                for j in range(self.cstart[c], self.cstart[c + 1]):
                    l = self.lits[j]
                    v = l if l > 0 else -l
                    if self.assign[v] < 0:
                        self.used[v] = 1
                lb += 1
        return lb

    cdef bint dfs(self, int tight):
        # tight >= 1: variables 1..tight-1 agree with start
        cdef int lb, v, u, val, mark, short, child
        self.nodes += 1
        if not self._propagate():
            return False
        lb = self._lower_bound()
        short = self.min_true - self.count_true
        if self.count_true + (lb if lb > short else short) > self.bound:
            return False
        if short > self.nvars - self.trail_len:
            return False
        if lb == 0 and short <= 0:
            for v in range(1, self.nvars + 1):
                self.best[v] = 1 if self.assign[v] == 1 else 0
            self.found = True
            if not self.minimise:
                return True
            self.bound = self.count_true - 1
            return self.count_true <= self.lower
        v = 1
        while self.assign[v] >= 0:
            v += 1
        if tight > 0:
            for u in range(tight, v):
                if self.assign[u] != self.start[u]:
                    if self.assign[u] < self.start[u]:
                        return False  # every model below is smaller than start
                    tight = -1
                    break
        for val in range(2):
            child = -1
            if tight > 0:
                if val < self.start[v]:
                    continue
                if val == self.start[v]:
                    child = v + 1
            mark = self.trail_len
            self._set(v, val)
            if self.dfs(child):
                self._undo(mark)
                return True
            self._undo(mark)
        return False


def search(int nvars, clauses, int bound=-1, int lower=0, int min_true=0, start=None):
    """Lexicographically first model with the fewest true variables.

    See ``_kernels_py.search`` for the contract.
    """
    cdef _Search s = _Search()
    cdef list cls = [list(cl) for cl in clauses]
    cdef int v
    for cl in cls:
        if not cl:
            return None, 0
    if min_true > nvars:
        return None, 0
    s.setup(nvars, cls)
    s.minimise = bound >= 0
    s.bound = bound if bound >= 0 else nvars
    s.lower = lower
    s.min_true = min_true
    if start is not None:
        if bound >= 0:
            raise ValueError("start only applies to first-model search")
        if len(start) != nvars:
            raise ValueError("start must assign every variable")
        s.start = <signed char *> calloc(nvars + 1, sizeof(signed char))
        if not s.start:
            raise MemoryError()
        for v in range(nvars):
            s.start[v + 1] = 1 if start[v] else 0
        s.dfs(1)
    else:
        s.dfs(-1)
    if not s.found:
        return None, s.nodes
    return [int(s.best[v]) for v in range(1, nvars + 1)], s.nodes
