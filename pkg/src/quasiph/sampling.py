"""Random finite spaces for property tests and the acceptance suite.

Entries are drawn on a grid (default step 0.25) so that ties occur and all
sums stay exactly representable.  A shortest-path closure turns an arbitrary
non-negative matrix into a pseudo-quasi-metric.
"""
from __future__ import annotations

import numpy as np

from .spaces import Space, WeightedDigraph


def _grid(rng: np.random.Generator, shape, high: float, step: float) -> np.ndarray:
    return np.round(rng.uniform(0.0, high, size=shape) / step) * step


def _close(d: np.ndarray) -> np.ndarray:
    np.fill_diagonal(d, 0.0)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def random_pseudo_quasi_metric(
    rng: np.random.Generator, n: int, high: float = 10.0, step: float = 0.25, zero_prob: float = 0.1
) -> Space:
    d = _grid(rng, (n, n), high, step)
    d[rng.random((n, n)) < zero_prob] = 0.0
    return Space(tuple(range(n)), _close(d))


def random_metric(rng: np.random.Generator, n: int, high: float = 10.0, step: float = 0.25) -> Space:
    """Symmetric, separated: every off-diagonal entry is at least ``step``."""
    d = np.maximum(_grid(rng, (n, n), high, step), step)
    d = np.minimum(d, d.T)
    return Space(tuple(range(n)), _close(d))


def random_digraph(
    rng: np.random.Generator, n: int, arrow_prob: float = 0.45, high: float = 10.0, step: float = 0.25
) -> WeightedDigraph:
    w = _grid(rng, (n, n), high, step)
    arrows = [(i, j, float(w[i, j])) for i in range(n) for j in range(n) if i != j and rng.random() < arrow_prob]
    return WeightedDigraph(range(n), arrows)
