import numpy as np
import pytest
from hypothesis import strategies as st

from quasiph import Space, WeightedDigraph, from_digraph

GRID = st.integers(0, 40).map(lambda k: k * 0.25)


def closure(d):
    d = np.array(d, dtype=float)
    np.fill_diagonal(d, 0.0)
    for k in range(len(d)):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


@st.composite
def pq_spaces(draw, min_n=1, max_n=4, allow_inf=False):
    """Random pseudo-quasi-metric spaces on a 0.25 grid."""
    n = draw(st.integers(min_n, max_n))
    entry = st.one_of(GRID, st.just(np.inf)) if allow_inf else GRID
    rows = draw(st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n))
    return Space(tuple(range(n)), closure(rows))


@pytest.fixture
def three_cycle():
    return from_digraph(WeightedDigraph("abc", [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]))


@pytest.fixture
def k10_quasi():
    k = 10.0
    return Space(("x", "y", "z"), [[0, 1, k], [k, 0, k], [k, 1, 0]])


@pytest.fixture
def two_point_asym():
    return Space(("x", "y"), [[0, 1], [3, 0]])
