"""Ordered tuple complexes over the two-element field.

Tuples are plain ``tuple[int, ...]`` of vertex indices, repeats allowed.  A
chain is a ``frozenset`` of tuples of one dimension (coefficients in F2).

A filtered complex stores each tuple with the smallest threshold at which it
is present.  Unnormalized complexes are closed under adjacent repeats, which
makes them simplicial sets; the normalized complex keeps only tuples with no
two equal neighbours and drops such faces from boundaries.  Both compute the
same homology, the normalized one with far fewer cells.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError

Chain = frozenset


def faces(t: tuple) -> list[tuple]:
    return [t[:i] + t[i + 1:] for i in range(len(t))]


def boundary(t: tuple) -> Chain:
    """Faces of ``t`` occurring an odd number of times; empty for a vertex."""
    if len(t) <= 1:
        return frozenset()
    counts = Counter(faces(t))
    return frozenset(f for f, c in counts.items() if c % 2)


def is_degenerate(t: tuple) -> bool:
    return any(a == b for a, b in zip(t, t[1:]))


def normalized_boundary(t: tuple) -> Chain:
    return frozenset(f for f in boundary(t) if not is_degenerate(f))


def chain_boundary(chain, normalized: bool = False) -> Chain:
    op = normalized_boundary if normalized else boundary
    out = set()
    for t in chain:
        out.symmetric_difference_update(op(t))
    return frozenset(out)


def boundary_squared_is_zero(t: tuple, normalized: bool = False) -> bool:
    op = normalized_boundary if normalized else boundary
    return not chain_boundary(op(t), normalized)


@dataclass(frozen=True, eq=False)
class FilteredOTComplex:
    """Tuples of dimension at most ``dim_cap`` mapped to their appearance value.

    Tuples with infinite value are never stored.
    """

    cells: Mapping[tuple, float]
    dim_cap: int
    n_vertices: int
    normalized: bool = False
    _by_dim: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_dim: dict[int, list] = {}
        for t in self.cells:
            by_dim.setdefault(len(t) - 1, []).append(t)
        object.__setattr__(self, "_by_dim", by_dim)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.cells

    def value(self, t) -> float:
        return self.cells.get(tuple(t), math.inf)

    def tuples(self, dim: int) -> list[tuple]:
        return list(self._by_dim.get(dim, ()))

    def sublevel(self, threshold: float, dim: int) -> list[tuple]:
        return [t for t in self._by_dim.get(dim, ()) if self.cells[t] <= threshold]

    def boundary_of(self, t: tuple) -> Chain:
        return normalized_boundary(t) if self.normalized else boundary(t)

    def values(self) -> list[float]:
        return sorted(set(self.cells.values()))

    def invariant_failures(self) -> list[str]:
        """Face closure with monotone values; adjacent-repeat closure when unnormalized."""
        out = []
        for t, v in self.cells.items():
            if len(t) > 1:
                for f in faces(t):
                    if self.normalized and is_degenerate(f):
                        continue
                    if self.value(f) > v:
                        out.append(f"face {f} of {t} missing or later ({self.value(f)} > {v})")
            if self.normalized and is_degenerate(t):
                out.append(f"degenerate tuple {t} in a normalized complex")
            if not self.normalized and len(t) - 1 < self.dim_cap:
                for i in range(len(t)):
                    rep = t[: i + 1] + t[i:]
                    if self.value(rep) != v:
                        out.append(f"repeat {rep} of {t} has value {self.value(rep)} != {v}")
        return out


def iter_tuples(n: int, dim_cap: int, normalized: bool = False) -> Iterator[tuple]:
    """All tuples on ``n`` vertices of dimension ``<= dim_cap``, by dimension then lexicographically."""
    for p in range(dim_cap + 1):
        for t in itertools.product(range(n), repeat=p + 1):
            if normalized and is_degenerate(t):
                continue
            yield t


def grow_complex(
    n: int,
    dim_cap: int,
    step: Callable[[tuple, float, int], float],
    normalized: bool = False,
) -> FilteredOTComplex:
    """Build a filtered complex by extending tuples one vertex at a time.

    ``step(prefix, prefix_value, v)`` returns the value of ``prefix + (v,)``;
    it must be non-decreasing along extensions, which lets infinite prefixes
    be pruned.
    """
    if dim_cap < 0:
        raise InputError("dim_cap must be non-negative")
    cells: dict[tuple, float] = {}
    frontier = [((v,), 0.0) for v in range(n)]
    for p in range(dim_cap + 1):
        for t, val in frontier:
            cells[t] = val
        if p == dim_cap:
            break
        nxt = []
        for t, val in frontier:
            for v in range(n):
                if normalized and t[-1] == v:
                    continue
                w = step(t, val, v)
                if not math.isinf(w):
                    nxt.append((t + (v,), w))
        frontier = nxt
    ordered = dict(sorted(cells.items(), key=lambda kv: (len(kv[0]), kv[0])))
    return FilteredOTComplex(ordered, dim_cap, n, normalized)


def _check_symmetric(adjacency: np.ndarray) -> None:
    if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
        raise InputError("adjacency must be a square matrix")
    if not np.array_equal(adjacency, adjacency.T):
        raise InputError("adjacency matrix is not symmetric")
    if np.any(np.diag(adjacency) != 0):
        raise InputError("adjacency matrix needs a zero diagonal")


def from_clique_filtration(adjacency, dim_cap: int, normalized: bool = False) -> FilteredOTComplex:
    """OT-complex of the clique filtration: a tuple appears once all its pairs are edges."""
    a = np.asarray(adjacency, dtype=np.float64)
    _check_symmetric(a)

    def step(t, val, v):
        return max(val, max(a[u, v] for u in t))

    return grow_complex(a.shape[0], dim_cap, step, normalized)


def normalize(k: FilteredOTComplex) -> FilteredOTComplex:
    if k.normalized:
        return k
    cells = {t: v for t, v in k.cells.items() if not is_degenerate(t)}
    return FilteredOTComplex(cells, k.dim_cap, k.n_vertices, normalized=True)


def is_expansion(k: FilteredOTComplex, k_tilde: FilteredOTComplex, pi: Sequence[int]) -> bool:
    """Whether ``k_tilde`` is an expansion of ``k`` along the vertex map ``pi``.

    Every tuple on the vertices of ``k_tilde`` up to the common ``dim_cap``
    must appear at exactly the value of its image under ``pi``.
    """
    if k.dim_cap != k_tilde.dim_cap:
        raise InputError(f"dim caps differ: {k.dim_cap} vs {k_tilde.dim_cap}")
    if k.normalized or k_tilde.normalized:
        raise InputError("expansions are defined on complexes closed under adjacent repeats")
    pi = list(pi)
    if len(pi) != k_tilde.n_vertices or set(pi) != set(range(k.n_vertices)):
        return False
    for t in iter_tuples(k_tilde.n_vertices, k_tilde.dim_cap):
        if k_tilde.value(t) != k.value(tuple(pi[v] for v in t)):
            return False
    return True


def rank_gf2(matrix) -> int:
    """Rank over the two-element field by dense Gaussian elimination."""
    m = (np.asarray(matrix) % 2).astype(np.uint8)
    if m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        hits = np.flatnonzero(m[rank:, c])
        if not len(hits):
            continue
        p = rank + hits[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        others = np.flatnonzero(m[:, c])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def boundary_matrix(domain: Sequence[tuple], codomain: Sequence[tuple], normalized: bool = False) -> np.ndarray:
    row = {t: i for i, t in enumerate(codomain)}
    op = normalized_boundary if normalized else boundary
    m = np.zeros((len(codomain), len(domain)), dtype=np.uint8)
    for j, t in enumerate(domain):
        for f in op(t):
            m[row[f], j] = 1
    return m


def homology_rank_oracle(k: FilteredOTComplex, t: float, dim: int) -> int:
    """Rank of H_dim of the sublevel complex at ``t`` from the full chain groups.

    Dense ranks of the unnormalized boundary maps; an independent referee for
    the reduction engine.
    """
    if k.normalized:
        raise InputError("the oracle works on unnormalized complexes")
    if dim < 0 or dim + 1 > k.dim_cap:
        raise InputError(f"H_{dim} needs dim_cap >= {dim + 1}, have {k.dim_cap}")
    lower = k.sublevel(t, dim - 1) if dim > 0 else []
    here = k.sublevel(t, dim)
    upper = k.sublevel(t, dim + 1)
    rank_out = rank_gf2(boundary_matrix(here, lower)) if dim > 0 else 0
    rank_in = rank_gf2(boundary_matrix(upper, here))
    return len(here) - rank_out - rank_in
