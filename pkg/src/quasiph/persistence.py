"""Boundary-matrix reduction over F2 and the bottleneck distance."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InputError
from .otcomplex import FilteredOTComplex


class Bar(NamedTuple):
    birth: float
    death: float | None  # None: the class never dies

    @property
    def infinite(self) -> bool:
        return self.death is None

    def spans(self, s: float, t: float) -> bool:
        """Alive on all of ``[s, t]``."""
        return self.birth <= s and (self.death is None or self.death > t)


def _as_bar(item) -> Bar:
    b, d = item
    if d is not None and math.isinf(d):
        d = None
    b = float(b)
    d = None if d is None else float(d)
    if d is not None and d < b:
        raise InputError(f"bar ({b}, {d}) dies before it is born")
    return Bar(b, d)


def _bar_key(bar: Bar):
    return (bar.birth, bar.death is None, bar.death or 0.0)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Bars per homology dimension, each list sorted; equality is multiset equality."""

    bars: Mapping[int, tuple]

    def __init__(self, bars: Mapping[int, Iterable] | None = None):
        norm = {}
        for dim, items in sorted((bars or {}).items()):
            norm[int(dim)] = tuple(sorted((_as_bar(x) for x in items), key=_bar_key))
        object.__setattr__(self, "bars", norm)

    def __getitem__(self, dim: int) -> tuple:
        return self.bars.get(dim, ())

    @property
    def dims(self) -> list[int]:
        return list(self.bars)

    def rank(self, dim: int, s: float, t: float) -> int:
        """Number of bars spanning ``[s, t]``, the rank of the map from ``s`` to ``t``."""
        return sum(b.spans(s, t) for b in self[dim])

    def betti(self, dim: int, t: float) -> int:
        return self.rank(dim, t, t)

    def restrict(self, dims: Iterable[int]) -> "PersistenceDiagram":
        return PersistenceDiagram({d: self[d] for d in dims})

    def to_json(self) -> dict:
        return {str(d): [[b.birth, b.death] for b in bars] for d, bars in self.bars.items()}

    @classmethod
    def from_json(cls, payload: Mapping) -> "PersistenceDiagram":
        def death(v):
            if v is None or v == "inf":
                return None
            return float(v)

        return cls({int(k): [(float(b), death(d)) for b, d in v] for k, v in payload.items()})


# -- filtered cell complexes ---------------------------------------------------


class Cell(NamedTuple):
    id: int
    dim: int
    boundary: tuple
    value: float


class FilteredCellComplex:
    """Cells sorted by ``(value, dim, id)``; every boundary cell precedes its coface."""

    def __init__(self, cells: Iterable[Cell], labels: Mapping[int, object] | None = None):
        cells = sorted((Cell(*c) for c in cells), key=lambda c: (c.value, c.dim, c.id))
        pos = {}
        for i, c in enumerate(cells):
            if c.value < 0 or math.isnan(c.value):
                raise InputError(f"cell {c.id} has invalid value {c.value}")
            if c.id in pos:
                raise InputError(f"duplicate cell id {c.id}")
            pos[c.id] = i
        by_id = {c.id: c for c in cells}
        for c in cells:
            for f in c.boundary:
                if f not in pos or pos[f] >= pos[c.id]:
                    raise InputError(f"cell {c.id} has boundary cell {f} that does not precede it")
                if by_id[f].dim != c.dim - 1:
                    raise InputError(f"cell {c.id} of dim {c.dim} has boundary cell {f} of dim {by_id[f].dim}")
        self.cells = tuple(cells)
        self.labels = dict(labels or {})

    def __len__(self) -> int:
        return len(self.cells)

    @classmethod
    def from_ot(cls, k: FilteredOTComplex) -> "FilteredCellComplex":
        ids = {t: i for i, t in enumerate(k.cells)}
        cells = [
            Cell(ids[t], len(t) - 1, tuple(sorted(ids[f] for f in k.boundary_of(t))), v)
            for t, v in k.cells.items()
        ]
        return cls(cells, {i: t for t, i in ids.items()})

    @classmethod
    def from_simplices(cls, simplices: Sequence[tuple[tuple, float]]) -> "FilteredCellComplex":
        """Simplicial complex from sorted vertex tuples with their values."""
        ids = {s: i for i, (s, _) in enumerate(simplices)}
        cells = []
        for s, v in simplices:
            bd = () if len(s) == 1 else tuple(sorted(ids[s[:i] + s[i + 1:]] for i in range(len(s))))
            cells.append(Cell(ids[s], len(s) - 1, bd, v))
        return cls(cells, {i: s for s, i in ids.items()})


def reduce(c: FilteredCellComplex, max_dim: int) -> PersistenceDiagram:
    """Standard column reduction; returns bars in dimensions ``0..max_dim``.

    Cells above ``max_dim + 1`` are ignored.  Zero-length bars are dropped.
    """
    cells = [x for x in c.cells if x.dim <= max_dim + 1]
    pos = {x.id: i for i, x in enumerate(cells)}
    columns: list[int] = []
    pivot_col: dict[int, int] = {}
    paired = set()
    bars: dict[int, list] = {d: [] for d in range(max_dim + 1)}
    for j, cell in enumerate(cells):
        col = 0
        for f in cell.boundary:
            col ^= 1 << pos[f]
        while col:
            low = col.bit_length() - 1
            k = pivot_col.get(low)
            if k is None:
                pivot_col[low] = j
                paired.update((low, j))
                birth = cells[low]
                if birth.value < cell.value:
                    bars[birth.dim].append((birth.value, cell.value))
                break
            col ^= columns[k]
        columns.append(col)
    for i, cell in enumerate(cells):
        if i not in paired and cell.dim <= max_dim:
            bars[cell.dim].append((cell.value, None))
    return PersistenceDiagram(bars)


def ot_diagram(k: FilteredOTComplex, max_dim: int) -> PersistenceDiagram:
    if k.dim_cap < max_dim + 1:
        raise InputError(f"dim_cap {k.dim_cap} too small for H_{max_dim}")
    return reduce(FilteredCellComplex.from_ot(k), max_dim)


# -- bottleneck ------------------------------------------------------------------


def _linf(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _has_perfect_matching(fa, fb, r: float) -> bool:
    n, m = len(fa), len(fb)
    size = n + m
    rows, cols = [], []
    for i, p in enumerate(fa):
        for j, q in enumerate(fb):
            if _linf(p, q) <= r:
                rows.append(i)
                cols.append(j)
        if (p[1] - p[0]) / 2 <= r:
            rows.append(i)
            cols.append(m + i)
    for j, q in enumerate(fb):
        if (q[1] - q[0]) / 2 <= r:
            rows.append(n + j)
            cols.append(j)
        for i in range(n):
            rows.append(n + j)
            cols.append(m + i)
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int) -> float:
    """Bottleneck distance between the ``dim`` parts of two diagrams.

    Points may be matched to the diagonal at half their persistence; bars
    that never die can only be matched to each other, at the difference of
    their births, and a mismatch in their numbers gives ``inf``.
    """
    a, b = d1[dim], d2[dim]
    ess_a = sorted(x.birth for x in a if x.infinite)
    ess_b = sorted(x.birth for x in b if x.infinite)
    if len(ess_a) != len(ess_b):
        return math.inf
    essential = max((abs(p - q) for p, q in zip(ess_a, ess_b)), default=0.0)
    fa = [(x.birth, x.death) for x in a if not x.infinite]
    fb = [(x.birth, x.death) for x in b if not x.infinite]
    if not fa and not fb:
        return essential
    candidates = {(p[1] - p[0]) / 2 for p in fa + fb}
    candidates.update(_linf(p, q) for p in fa for q in fb)
    levels = sorted(candidates)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(fa, fb, levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(essential, levels[lo])


def bottleneck_all(d1: PersistenceDiagram, d2: PersistenceDiagram, dims: Iterable[int]) -> dict[int, float]:
    return {d: bottleneck(d1, d2, d) for d in dims}

