"""Seeded generators for synthetic preference profiles.

Every generator is a pure function of ``(spec, n, m)``: randomness comes
from a PCG64 bit generator seeded with ``spec.seed``.  Datasets derive one
seed per profile from a master seed with
``numpy.random.SeedSequence([master, culture_index, repetition])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import RankMatrix, make_matrix

KINDS = (
    "IC",
    "IAC",
    "Mallows",
    "Urn",
    "SP-Conitzer",
    "SP-Walsh",
    "Euclid1D",
    "Euclid3D",
    "Disc2D",
    "Circle2D",
    "Sphere3D",
    "Identity",
    "Antagonism",
    "Uniformity",
)

_ALIASES = {k.lower(): k for k in KINDS}
_ALIASES.update({"id": "Identity", "an": "Antagonism", "un": "Uniformity", "identical": "Identity"})


class CultureError(ValueError):
    pass


@dataclass(frozen=True)
class CultureSpec:
    """A culture kind with its parameter and RNG seed.

    ``param`` is the normalized dispersion for Mallows (in ``(0, 1]``) and
    the contagion for Urn (``>= 0``); other kinds take no parameter.
    """

    kind: str
    param: float | None = None
    seed: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise CultureError(f"unknown culture {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "Mallows":
            if self.param is None or not 0 < self.param <= 1:
                raise CultureError("Mallows needs a dispersion in (0, 1]")
        elif kind == "Urn":
            if self.param is None or self.param < 0:
                raise CultureError("Urn needs a contagion >= 0")
        elif self.param is not None:
            raise CultureError(f"{kind} takes no parameter")
        if not 0 <= int(self.seed) < 2**64:
            raise CultureError("seed must fit in 64 bits")
        if not self.label:
            object.__setattr__(self, "label", self.name)

    @property
    def name(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}:{self.param:g}"

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "CultureSpec":
        """``kind`` or ``kind:param``, e.g. ``mallows:0.5``."""
        kind, _, param = text.strip().partition(":")
        try:
            value = float(param) if param else None
        except ValueError:
            raise CultureError(f"bad culture parameter in {text!r}") from None
        return cls(kind, value, seed)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _ic(rng, n, m):
    return [list(rng.permutation(m)) for _ in range(n)]


def _urn(rng, n, m, alpha):
    # Polya urn: m! rankings plus alpha * m! copies of every earlier draw
    rows = []
    for j in range(n):
        if j == 0 or rng.random() < 1.0 / (1.0 + j * alpha):
            rows.append(list(rng.permutation(m)))
        else:
            rows.append(list(rows[rng.integers(j)]))
    return rows


def _insertion_probs(m, phi):
    """Repeated insertion: at step ``i`` the new item lands ``k`` places
    above the bottom with probability proportional to ``phi**k``."""
    out = []
    for i in range(1, m + 1):
        w = np.array([phi**k for k in range(i)])
        out.append(w / w.sum())
    return out


def expected_swaps(m: int, phi: float) -> float:
    """Mean swap distance to the centre under Mallows with raw dispersion ``phi``."""
    if phi >= 1:
        return m * (m - 1) / 4
    return float(sum((np.arange(len(p)) * p).sum() for p in _insertion_probs(m, phi)))


def raw_phi(m: int, norm_phi: float) -> float:
    """Raw dispersion whose mean swap distance is ``norm_phi * C(m,2) / 2``.

    ``norm_phi = 1`` gives the uniform culture; the map is increasing, so
    bisection finds it.
    """
    if norm_phi >= 1 or m < 2:
        return 1.0
    target = norm_phi * m * (m - 1) / 4
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = (lo + hi) / 2
        if expected_swaps(m, mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def mallows_sample(rng, n, m, phi, centre=None):
    """``n`` ballots around ``centre`` (identity by default), raw ``phi``."""
    centre = list(range(m)) if centre is None else list(centre)
    probs = _insertion_probs(m, phi)
    rows = []
    for _ in range(n):
        ballot: list[int] = []
        for i, p in enumerate(probs):
            k = rng.choice(i + 1, p=p)  # k places above the bottom
            ballot.insert(len(ballot) - k, centre[i])
        rows.append(ballot)
    return rows


def _sp_conitzer(rng, n, m):
    rows = []
    for _ in range(n):
        peak = int(rng.integers(m))
        left, right = peak - 1, peak + 1
        ballot = [peak]
        while left >= 0 or right < m:
            if right >= m or (left >= 0 and rng.random() < 0.5):
                ballot.append(left)
                left -= 1
            else:
                ballot.append(right)
                right += 1
        rows.append(ballot)
    return rows


def _sp_walsh(rng, n, m):
    # the worst remaining candidate is always an end of the remaining
    # interval; picking either end with probability 1/2 is uniform over
    # the 2**(m-1) single-peaked orders
    rows = []
    for _ in range(n):
        lo, hi = 0, m - 1
        bottom = []
        while lo < hi:
            if rng.random() < 0.5:
                bottom.append(lo)
                lo += 1
            else:
                bottom.append(hi)
                hi -= 1
        rows.append([lo] + bottom[::-1])
    return rows


def _unit_vectors(rng, k, dim):
    v = rng.standard_normal((k, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def euclidean_points(kind: str, rng, k: int) -> np.ndarray:
    """``k`` points drawn for a Euclidean culture."""
    if kind == "Euclid1D":
        return rng.random((k, 1))
    if kind == "Euclid3D":
        return rng.random((k, 3))
    if kind == "Disc2D":
        r = np.sqrt(rng.random(k))
        t = rng.random(k) * 2 * math.pi
        return np.column_stack([r * np.cos(t), r * np.sin(t)])
    if kind == "Circle2D":
        t = rng.random(k) * 2 * math.pi
        return np.column_stack([np.cos(t), np.sin(t)])
    if kind == "Sphere3D":
        return _unit_vectors(rng, k, 3)
    raise CultureError(f"{kind} is not a Euclidean culture")


def ballots_from_points(voters: np.ndarray, cands: np.ndarray) -> list[list[int]]:
    """Each voter ranks candidates by increasing distance (ties by id)."""
    d = np.linalg.norm(voters[:, None, :] - cands[None, :, :], axis=2)
    return [list(np.lexsort((np.arange(len(cands)), row))) for row in d]


def euclidean_profile(spec: CultureSpec, n: int, m: int):
    """Profile plus the voter and candidate points it was built from."""
    rng = _rng(spec.seed)
    cands = euclidean_points(spec.kind, rng, m)
    voters = euclidean_points(spec.kind, rng, n)
    return make_matrix([[int(c) for c in r] for r in ballots_from_points(voters, cands)]), voters, cands


def generate(spec: CultureSpec, n: int, m: int) -> RankMatrix:
    """A complete ``n x m`` profile drawn from ``spec``."""
    if n < 1 or m < 2:
        raise CultureError("need n >= 1 and m >= 2")
    kind = spec.kind
    rng = _rng(spec.seed)
    if kind in ("IC", "Uniformity"):
        rows = _ic(rng, n, m)
    elif kind == "IAC":
        rows = _urn(rng, n, m, 1 / math.factorial(m))
    elif kind == "Urn":
        rows = _urn(rng, n, m, spec.param)
    elif kind == "Mallows":
        rows = mallows_sample(rng, n, m, raw_phi(m, spec.param))
    elif kind == "SP-Conitzer":
        rows = _sp_conitzer(rng, n, m)
    elif kind == "SP-Walsh":
        rows = _sp_walsh(rng, n, m)
    elif kind == "Identity":
        rows = [list(range(m)) for _ in range(n)]
    elif kind == "Antagonism":
        if n % 2:
            raise CultureError("the antagonism culture needs an even number of voters")
        rows = [list(range(m))] * (n // 2) + [list(range(m))[::-1]] * (n // 2)
    else:
        return euclidean_profile(spec, n, m)[0]
    return make_matrix([[int(c) for c in r] for r in rows])


def is_single_peaked(ballot, axis) -> bool:
    """Every top segment of the ballot is a contiguous stretch of ``axis``."""
    where = {c: k for k, c in enumerate(axis)}
    lo = hi = where[ballot[0]]
    for c in ballot[1:]:
        k = where[c]
        if k == lo - 1:
            lo = k
        elif k == hi + 1:
            hi = k
        else:
            return False
    return True


DEFAULT_DATASET = """\
# kind[:param] count
IC 10
IAC 10
Mallows:0.5 10
Mallows:0.2 10
Mallows:0.8 10
Urn:0.1 10
Urn:0.5 10
SP-Conitzer 10
SP-Walsh 10
Euclid1D 10
Euclid3D 10
Disc2D 10
Circle2D 10
Sphere3D 10
Uniformity 4
Identity 1
Antagonism 1
"""


def parse_dataset_spec(text: str) -> list[tuple[CultureSpec, int]]:
    """Lines of ``kind[:param] count``; ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CultureError(f"line {lineno}: expected 'kind[:param] count'")
        try:
            count = int(parts[1])
        except ValueError:
            raise CultureError(f"line {lineno}: bad count {parts[1]!r}") from None
        if count < 0:
            raise CultureError(f"line {lineno}: negative count")
        out.append((CultureSpec.parse(parts[0]), count))
    return out


def derive_seed(master: int, culture_index: int, repetition: int) -> int:
    ss = np.random.SeedSequence([master, culture_index, repetition])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_dataset(
    spec: str | Path | None = None, n: int = 12, m: int = 4, master_seed: int = 0
) -> list[tuple[RankMatrix, str]]:
    """Profiles with culture labels; ``spec`` is dataset text or a path to it.

    Without ``spec`` the built-in 146-profile list is used.
    """
    if spec is None:
        text = DEFAULT_DATASET
    elif isinstance(spec, Path) or "\n" not in str(spec) and Path(str(spec)).exists():
        text = Path(spec).read_text()
    else:
        text = str(spec)
    out = []
    for ci, (culture, count) in enumerate(parse_dataset_spec(text)):
        for rep in range(count):
            seeded = replace(culture, seed=derive_seed(master_seed, ci, rep))
            out.append((generate(seeded, n, m), culture.label))
    return out
