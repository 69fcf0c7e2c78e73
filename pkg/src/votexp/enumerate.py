"""Enumerating all explanations and finding cardinality-smallest ones.

Both searches drive a :class:`~votexp.satset.SeedCnf`: every model is a
candidate seed, classified by the necessary-winner test, grown into an
explanation and blocked so it is never proposed again.
"""

from __future__ import annotations

import logging

from .core import PartialRankMatrix, complement
from .satset import SeedCnf
from .scoring import ScoringVector, is_necessary_winner, row_bounds, winners
from .xplain import Explanation, PreconditionError, find_cxp, find_iaxp

log = logging.getLogger(__name__)


def _require_winner(full: PartialRankMatrix, rule: ScoringVector, w: int) -> None:
    if not full.is_complete:
        raise PreconditionError("the explained profile must be complete")
    if rule.m != full.m:
        raise PreconditionError("rule length does not match the number of candidates")
    if not 0 <= w < full.m or w not in winners(full, rule):
        raise PreconditionError(f"candidate {w} is not a winner of the profile")


def enumerate_xps(
    full: PartialRankMatrix,
    rule: ScoringVector,
    w: int,
    limit: int | None = None,
    backend: str | None = None,
) -> tuple[list[Explanation], list[Explanation]]:
    """All iAXps and all CXps of ``w`` winning ``full``.

    ``limit`` caps the total number of explanations returned; without it
    the loop runs until the seed map is unsatisfiable, at which point both
    lists are complete.
    """
    _require_winner(full, rule, w)
    seeds = SeedCnf(full.n, full.m, backend=backend)
    iaxps: list[Explanation] = []
    cxps: list[Explanation] = []
    while limit is None or len(iaxps) + len(cxps) < limit:
        model = seeds.solve()
        if model is None:
            break
        seed = full.restrict(model.true_cells())
        if is_necessary_winner(seed, rule, w):
            xp = find_iaxp(full, rule, w, seed, backend=backend)
            iaxps.append(xp)
            seeds.add_blocking_up(xp.cells.locked())
        else:
            xp = find_cxp(full, rule, w, complement(full, seed), backend=backend)
            cxps.append(xp)
            seeds.add_blocking_down(xp.cells.locked())
    log.debug("enumerated %d iAXps, %d CXps", len(iaxps), len(cxps))
    return iaxps, cxps


def borda_floor(full: PartialRankMatrix, rule: ScoringVector) -> int:
    """Cardinality every explanation must reach under a Borda-equivalent rule.

    Any AXp under Borda locks at least ``n - n // m`` cells; rules that are
    an increasing affine image of Borda decide necessary winners the same
    way, so the bound carries over.  Other rules get 0.
    """
    ws = rule.weights
    steps = {ws[k] - ws[k + 1] for k in range(len(ws) - 1)}
    if len(steps) != 1:
        return 0
    return full.n - full.n // full.m


def _rotated_cxps(full, rule, w, freed, backend):
    """CXps inside ``freed``, shrunk with the row order rotated to each start row.

    Different visiting orders land on different CXps; feeding several of
    them per round cuts the number of minimum-model calls.
    """
    cells = list(freed.locked())
    n = full.n
    found = {}
    for r in range(n):
        order = sorted(cells, key=lambda c: ((c[0] - r) % n, c[1]))
        cxp = find_cxp(full, rule, w, freed, backend=backend, order=order)
        found.setdefault(cxp.cellset(), cxp)
    return list(found.values())


def _greedy_hitting_set(n: int, m: int, sets: list[frozenset], floor: int) -> set:
    """Cells meeting every set in ``sets``, picked greedily by coverage.

    Rows left with exactly one unpicked cell are completed so the result
    respects the irredundancy shape; cells are then added row-major until
    ``floor`` is reached.
    """
    chosen: set = set()
    open_sets = list(sets)
    while open_sets:
        counts: dict = {}
        for cells in open_sets:
            for c in cells:
                counts[c] = counts.get(c, 0) + 1
        best = min(counts, key=lambda c: (-counts[c], c))
        chosen.add(best)
        open_sets = [cells for cells in open_sets if best not in cells]
    for i in range(n):
        row = [(i, k) for k in range(m)]
        if sum(c in chosen for c in row) == m - 1:
            chosen.update(row)
    for i in range(n):
        if len(chosen) >= floor:
            break
        row = [(i, k) for k in range(m)]
        if not any(c in chosen for c in row):
            take = row[: min(m, max(2, floor - len(chosen)))]
            if len(take) == m - 1:
                take = row
            chosen.update(take)
    return chosen


def _row_options(row, rule: ScoringVector, w: int, rivals: list[int]):
    """Lock patterns of one ballot with their cost and rival excesses.

    A pattern is a bitmask of locked positions with zero or at least two
    free cells.  The excess of rival ``c`` is its best row score minus the
    worst row score of ``w`` under that pattern.
    """
    m = rule.m
    out = []
    for mask in range(1 << m):
        locked = bin(mask).count("1")
        if locked == m - 1:
            continue
        part = [row[k] if mask >> k & 1 else m for k in range(m)]
        low_w = row_bounds(part, rule, w)[0]
        excess = tuple(row_bounds(part, rule, c)[1] - low_w for c in rivals)
        out.append((locked, mask, excess))
    out.sort()
    return out


def _smallest_by_rows(full: PartialRankMatrix, rule: ScoringVector, w: int) -> PartialRankMatrix:
    """Smallest necessary-winner seed with the irredundant row shape.

    Rows are decided one at a time.  The state is the vector of summed
    rival excesses; states that can no longer reach zero are dropped and
    states already safe whatever comes next are clamped, which keeps the
    table small.  Only the cheapest way to reach each state is kept.
    """
    n, m = full.n, full.m
    rivals = [c for c in range(m) if c != w]
    options = [_row_options(row, rule, w, rivals) for row in full.cells]
    # best/worst excess still to come from rows i..n-1
    rest_lo = [[0] * len(rivals) for _ in range(n + 1)]
    rest_hi = [[0] * len(rivals) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for t in range(len(rivals)):
            vals = [opt[2][t] for opt in options[i]]
            rest_lo[i][t] = rest_lo[i + 1][t] + min(vals)
            rest_hi[i][t] = rest_hi[i + 1][t] + max(vals)
    layers = [{tuple(0 for _ in rivals): (0, None, 0)}]
    for i in range(n):
        lo, hi = rest_lo[i + 1], rest_hi[i + 1]
        nxt: dict = {}
        for state, (cost, _, _) in layers[-1].items():
            for locked, mask, excess in options[i]:
                new = []
                for t, e in enumerate(excess):
                    v = state[t] + e
                    if v + lo[t] > 0:
                        break
                    new.append(max(v, -hi[t]))
                else:
                    key = tuple(new)
                    c = cost + locked
                    old = nxt.get(key)
                    if old is None or c < old[0]:
                        nxt[key] = (c, state, mask)
        layers.append(nxt)
    state = min(layers[-1], key=lambda k: (layers[-1][k][0], k))
    keep = []
    for i in range(n, 0, -1):
        _, prev, mask = layers[i][state]
        keep += [(i - 1, k) for k in range(m) if mask >> k & 1]
        state = prev
    return full.restrict(sorted(keep))


SMALLEST_METHODS = ("hitting-set", "rows")


def find_smallest_iaxp(
    full: PartialRankMatrix,
    rule: ScoringVector,
    w: int,
    backend: str | None = None,
    use_floor: bool = True,
    method: str = "hitting-set",
) -> Explanation:
    """A cardinality-smallest iAXp.

    ``method="hitting-set"`` (default) runs the minimum-hitting-set loop
    over CXps described below.  ``method="rows"`` solves the same problem
    exactly by a dynamic program over per-ballot lock patterns; it is the
    practical choice for random profiles of a dozen ballots, where the
    hitting-set loop may need minutes.

    Hitting-set loop: the CXps collected so far are blocked in a seed map,
    and a minimum model of the map locks as few cells as any iAXp could.
    If that model keeps
    ``w`` a necessary winner it is returned.  Cheap greedy hitting sets
    run between exact solves: they harvest more CXps and, when they are
    necessary-winner seeds, shrink to iAXps giving an upper bound.  The
    search stops as soon as the exact optimum meets the best upper bound.
    With ``use_floor`` the models are never smaller than
    :func:`borda_floor`, which removes no iAXp.
    """
    _require_winner(full, rule, w)
    if method == "rows":
        seed = _smallest_by_rows(full, rule, w)
        return Explanation("iAXp", seed, w, rule, {"method": "rows"})
    if method != "hitting-set":
        raise ValueError(f"unknown method {method!r}; expected one of {SMALLEST_METHODS}")
    n, m = full.n, full.m
    seeds = SeedCnf(n, m, backend=backend)
    floor = borda_floor(full, rule) if use_floor else 0
    cxps: list[frozenset] = []
    best: Explanation | None = None
    stats = {"method": "hitting-set", "rounds": 0, "exact": 0}

    def harvest(seed):
        for cxp in _rotated_cxps(full, rule, w, complement(full, seed), backend):
            cells = cxp.cellset()
            cxps.append(cells)
            seeds.add_blocking_down(cells)

    def finish(xp):
        stats.update(clauses=len(seeds.clauses), cxps=len(cxps))
        return Explanation("iAXp", xp.cells, w, rule, stats)

    while True:
        # greedy phase: stop once a greedy seed survives
        while True:
            stats["rounds"] += 1
            seed = full.restrict(sorted(_greedy_hitting_set(n, m, cxps, floor)))
            if not is_necessary_winner(seed, rule, w):
                harvest(seed)
                continue
            xp = find_iaxp(full, rule, w, seed, backend=backend)
            if best is None or xp.size < best.size:
                best = xp
            break
        if best.size <= floor:
            return finish(best)
        stats["exact"] += 1
        model = seeds.minimum_model_milp(min_true=floor)
        if model is None:  # cannot happen: the full matrix always qualifies
            raise RuntimeError("seed map exhausted without an explanation")
        floor = model.weight
        if best.size <= floor:
            return finish(best)
        seed = full.restrict(model.true_cells())
        if is_necessary_winner(seed, rule, w):
            return finish(Explanation("iAXp", seed, w, rule))
        harvest(seed)


def find_smallest_cxp(
    full: PartialRankMatrix, rule: ScoringVector, w: int, backend: str | None = None
) -> Explanation:
    """A cardinality-smallest CXp via minimum hitting sets of iAXps.

    Variables mark freed cells; each round frees a minimum set hitting
    every iAXp found so far and either breaks the winner or yields a new
    iAXp inside the remaining cells.
    """
    _require_winner(full, rule, w)
    frees = SeedCnf(full.n, full.m, freed=True, backend=backend)
    rounds = 0
    while True:
        rounds += 1
        model = frees.minimum_model()
        if model is None:
            raise RuntimeError("seed map exhausted without an explanation")
        freed = full.restrict(model.true_cells())
        rest = complement(full, freed)
        if not is_necessary_winner(rest, rule, w):
            return Explanation("CXp", freed, w, rule, {"rounds": rounds, "nodes": frees.nodes})
        axp = find_iaxp(full, rule, w, rest, backend=backend)
        frees.add_blocking_down(axp.cells.locked())
