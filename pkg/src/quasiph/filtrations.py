"""The four Rips-style filtrations of a pseudo-quasi-metric space.

Each OT-complex construction assigns a tuple the smallest threshold at which
it is admitted:

* ``rips_fa``: max over all pairs of the symmetrized distance ``f_a``;
* ``directed_rips``: max of ``d(v_i, v_j)`` over ``i <= j``;
* ``poset_rips``: max over consecutive pairs of the reachability threshold.

The fourth construction, strongly connected persistence, lives in
:mod:`quasiph.scc` and only needs the digraph filtration defined here.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .otcomplex import FilteredOTComplex, from_clique_filtration, grow_complex
from .spaces import Space, symmetrize_fa


def rips_fa(space: Space, a: float, dim_cap: int, normalized: bool = False) -> FilteredOTComplex:
    space.validate()
    return from_clique_filtration(symmetrize_fa(space, a), dim_cap, normalized)


def directed_rips(space: Space, dim_cap: int, normalized: bool = False) -> FilteredOTComplex:
    """Tuples ``(v_0, ..., v_p)`` admitted once ``d(v_i, v_j) <= t`` for all ``i <= j``."""
    d = space.validate().dist

    def step(t, val, v):
        return max(val, max(d[u, v] for u in t))

    return grow_complex(space.n, dim_cap, step, normalized)


@dataclass(frozen=True, eq=False)
class DigraphFiltration:
    """``appear[i, j]``: threshold at which the arrow ``i -> j`` enters."""

    appear: np.ndarray

    @property
    def n(self) -> int:
        return self.appear.shape[0]

    def arrows_at(self, t: float) -> np.ndarray:
        """Boolean adjacency of the digraph at threshold ``t``."""
        return self.appear <= t

    def thresholds(self) -> list[float]:
        """Distinct finite arrow-appearance values, ascending."""
        vals = np.unique(self.appear)
        return [float(v) for v in vals if np.isfinite(v)]


def digraph_filtration(space: Space) -> DigraphFiltration:
    return DigraphFiltration(space.validate().dist)


def reachability_thresholds(f: DigraphFiltration) -> np.ndarray:
    """Minimax path values: ``r[i, j]`` is the least ``t`` with a path ``i -> j`` in ``D_t``."""
    r = np.array(f.appear, dtype=np.float64)
    np.fill_diagonal(r, 0.0)
    for k in range(f.n):
        r = np.minimum(r, np.maximum(r[:, k, None], r[None, k, :]))
    return r


def poset_rips(space: Space, dim_cap: int, normalized: bool = False) -> FilteredOTComplex:
    """Chains ``x_0 <=_t x_1 <=_t ... <=_t x_p`` of the reachability preorder.

    At a fixed threshold the preorder is transitive, so consecutive
    comparisons suffice.  Cycles are allowed: ``(x, y, x)`` appears once
    ``x`` and ``y`` reach each other.
    """
    r = reachability_thresholds(digraph_filtration(space))

    def step(t, val, v):
        return max(val, r[t[-1], v])

    return grow_complex(space.n, dim_cap, step, normalized)


def build_ot_filtration(
    space: Space,
    construction: str,
    dim_cap: int,
    a: float | None = None,
    normalized: bool = False,
) -> FilteredOTComplex:
    """Dispatch on the construction tag ``fa``, ``dir`` or ``poset``."""
    if construction == "fa":
        if a is None:
            raise ValueError("construction 'fa' needs the parameter a")
        return rips_fa(space, a, dim_cap, normalized)
    if construction == "dir":
        return directed_rips(space, dim_cap, normalized)
    if construction == "poset":
        return poset_rips(space, dim_cap, normalized)
    raise ValueError(f"no OT-complex construction named {construction!r}")


def classical_rips_cells(dist, max_simplex_dim: int) -> list[tuple[tuple, float]]:
    """Simplices (sorted vertex tuples) of the clique filtration of a symmetric matrix.

    Infinite simplices are skipped.  Used as the simplicial reference that the
    OT-complex constructions must reproduce on metric input.
    """
    d = np.asarray(dist, dtype=np.float64)
    n = d.shape[0]
    out = []
    for p in range(max_simplex_dim + 1):
        for s in itertools.combinations(range(n), p + 1):
            v = max((d[i, j] for i, j in itertools.combinations(s, 2)), default=0.0)
            if not math.isinf(v):
                out.append((s, float(v)))
    return out
