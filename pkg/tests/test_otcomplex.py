import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiph import (
    FilteredOTComplex,
    InputError,
    Space,
    boundary,
    boundary_squared_is_zero,
    directed_rips,
    from_clique_filtration,
    homology_rank_oracle,
    is_expansion,
    normalize,
    poset_rips,
    rips_fa,
)
from quasiph.otcomplex import grow_complex, iter_tuples, normalized_boundary, rank_gf2
from quasiph.persistence import ot_diagram

from conftest import pq_spaces
from oracles import gf2_rank, simplicial_betti

A, B, C = 0, 1, 2


def test_boundary_edge():
    assert boundary((A, B)) == {(A,), (B,)}


def test_boundary_aba():
    assert boundary((A, B, A)) == {(B, A), (A, A), (A, B)}


def test_boundary_degenerate_edge_cancels():
    assert boundary((A, A)) == frozenset()


def test_boundary_vertex_is_empty():
    assert boundary((A,)) == frozenset()


@pytest.mark.parametrize("t", [(A, B, C), (A, B, A), (A, A, A), (A, B, C, A), (A, A, B, B)])
def test_boundary_squared_examples(t):
    assert boundary_squared_is_zero(t)
    assert boundary_squared_is_zero(t, normalized=True)


@given(st.lists(st.integers(0, 3), min_size=3, max_size=6))
def test_boundary_squared_random(t):
    assert boundary_squared_is_zero(tuple(t))
    assert boundary_squared_is_zero(tuple(t), normalized=True)


def test_clique_two_points():
    k = from_clique_filtration([[0, 3], [3, 0]], 1)
    assert dict(k.cells) == {(0,): 0, (1,): 0, (0, 0): 0, (1, 1): 0, (0, 1): 3, (1, 0): 3}


def test_clique_single_point():
    k = from_clique_filtration([[0]], 2)
    assert dict(k.cells) == {(0,): 0, (0, 0): 0, (0, 0, 0): 0}


def test_clique_three_points_all_tuples():
    adj = np.ones((3, 3)) - np.eye(3)
    k = from_clique_filtration(adj, 2)
    assert len(k) == 3 + 9 + 27
    for t, v in k.cells.items():
        assert v == (0 if len(set(t)) == 1 else 1)


def test_clique_asymmetric_rejected():
    with pytest.raises(InputError):
        from_clique_filtration([[0, 1], [2, 0]], 1)


def test_normalize_drops_repeats():
    k = normalize(from_clique_filtration([[0, 3], [3, 0]], 1))
    assert set(k.cells) == {(0,), (1,), (0, 1), (1, 0)}


def test_normalized_boundary_aba():
    assert normalized_boundary((A, B, A)) == {(B, A), (A, B)}


def test_normalize_nondegenerate_unchanged():
    k = from_clique_filtration([[0, 3], [3, 0]], 1, normalized=True)
    assert normalize(k) is k


@settings(max_examples=30, deadline=None)
@given(pq_spaces(max_n=4, allow_inf=True))
def test_invariants_hold_for_constructions(space):
    for k in (rips_fa(space, 0.5, 2), directed_rips(space, 2), poset_rips(space, 2)):
        assert k.invariant_failures() == []
        assert normalize(k).invariant_failures() == []


def test_generation_matches_direct_enumeration(three_cycle):
    d = three_cycle.dist
    k = directed_rips(three_cycle, 3)
    for t in iter_tuples(3, 3):
        expected = max(d[t[i], t[j]] for i in range(len(t)) for j in range(i, len(t)))
        assert k.value(t) == expected


# -- expansion ------------------------------------------------------------------


def test_expansion_identity(three_cycle):
    k = directed_rips(three_cycle, 2)
    assert is_expansion(k, k, [0, 1, 2])


def test_expansion_by_duplicating_vertex(three_cycle):
    d = three_cycle.dist
    pi = [0, 1, 2, 0]
    dup = d[np.ix_(pi, pi)]
    k = directed_rips(three_cycle, 2)
    kt = directed_rips(Space(range(4), dup), 2)
    assert is_expansion(k, kt, pi)
    assert ot_diagram(normalize(kt), 1) == ot_diagram(normalize(k), 1)


def test_expansion_extra_tuple_fails(three_cycle):
    k = directed_rips(three_cycle, 2)
    cells = dict(k.cells)
    cells[(0, 1)] = 0.5
    bad = FilteredOTComplex(cells, 2, 3)
    assert not is_expansion(k, bad, [0, 1, 2])


def test_expansion_dim_cap_mismatch(three_cycle):
    with pytest.raises(InputError):
        is_expansion(directed_rips(three_cycle, 1), directed_rips(three_cycle, 2), [0, 1, 2])


# -- homology oracle -------------------------------------------------------------


def test_rank_gf2_agrees_with_bitset_rank():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m = rng.integers(0, 2, size=(rng.integers(1, 8), rng.integers(1, 8)))
        assert rank_gf2(m) == gf2_rank(m.tolist())


def test_oracle_single_point():
    k = from_clique_filtration([[0]], 1)
    for t in (0, 1, 5):
        assert homology_rank_oracle(k, t, 0) == 1


def test_oracle_three_cycle(three_cycle):
    k = directed_rips(three_cycle, 2)
    assert homology_rank_oracle(k, 1, 1) == 1
    assert homology_rank_oracle(k, 2, 1) == 0
    assert [homology_rank_oracle(k, t, 0) for t in (0.5, 1, 2)] == [3, 1, 1]


def test_oracle_needs_dim_cap(three_cycle):
    with pytest.raises(InputError):
        homology_rank_oracle(directed_rips(three_cycle, 1), 1, 1)


@settings(max_examples=25, deadline=None)
@given(pq_spaces(max_n=4, allow_inf=True))
def test_normalized_engine_matches_unnormalized_oracle(space):
    for k in (rips_fa(space, 0.25, 2), directed_rips(space, 2), poset_rips(space, 2)):
        dgm = ot_diagram(normalize(k), 1)
        for t in k.values():
            for dim in (0, 1):
                assert dgm.betti(dim, t) == homology_rank_oracle(k, t, dim)


@settings(max_examples=25, deadline=None)
@given(pq_spaces(max_n=5))
def test_clique_ot_homology_matches_simplicial(space):
    f = np.maximum(space.dist, space.dist.T)
    k = from_clique_filtration(f, 2)
    for t in k.values():
        for dim in (0, 1):
            assert homology_rank_oracle(k, t, dim) == simplicial_betti(f.tolist(), t, dim)


def test_grow_rejects_negative_cap():
    with pytest.raises(InputError):
        grow_complex(2, -1, lambda t, v, w: 0.0)


def test_all_tuples_enumerated_once():
    ts = list(iter_tuples(3, 2))
    assert len(ts) == len(set(ts)) == 3 + 9 + 27
    assert list(iter_tuples(3, 2, normalized=True)) == [
        t for t in ts if all(a != b for a, b in itertools.pairwise(t))
    ]
