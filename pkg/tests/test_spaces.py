import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiph import (
    Correspondence,
    InputError,
    InvalidSpaceError,
    Space,
    SpaceClass,
    WeightedDigraph,
    check_fa_triangle,
    classify,
    expand_pair,
    from_digraph,
    gromov_hausdorff,
    quotient_zero_pairs,
    symmetrize_fa,
)
from quasiph.spaces import correspondence_distortion, expansion_violations, fa_space, find_violation

from conftest import pq_spaces
from oracles import count_correspondences, gh_bruteforce


def sym2(d):
    return Space((0, 1), [[0, d], [d, 0]])


# -- classify ------------------------------------------------------------------


def test_classify_metric():
    assert classify(Space.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])) is SpaceClass.METRIC


def test_classify_k10_quasi_is_quasi(k10_quasi):
    assert classify(k10_quasi) is SpaceClass.QUASI_METRIC


def test_classify_zero_matrix_is_pseudo_metric():
    assert classify(Space.from_matrix([[0, 0], [0, 0]])) is SpaceClass.PSEUDO_METRIC


def test_classify_pseudo_quasi():
    assert classify(Space.from_matrix([[0, 0, 1], [0, 0, 1], [2, 2, 0]])) is SpaceClass.PSEUDO_QUASI_METRIC


@pytest.mark.parametrize(
    "matrix, prop",
    [
        ([[0, -1], [1, 0]], 1),
        ([[0, 5, 1], [1, 0, 1], [1, 1, 0]], 4),
        ([[1, 1], [1, 0]], 0),
    ],
)
def test_classify_invalid(matrix, prop):
    space = Space.from_matrix(matrix)
    assert classify(space) is SpaceClass.INVALID
    assert find_violation(space).prop == prop
    with pytest.raises(InvalidSpaceError):
        space.validate()


def test_triangle_witness_is_a_real_violation():
    space = Space.from_matrix([[0, 5, 1], [1, 0, 1], [1, 1, 0]])
    i, j, k = find_violation(space).witness
    d = space.dist
    assert d[i, k] > d[i, j] + d[j, k]


@pytest.mark.parametrize("bad", [[[0, 1]], [[0, float("nan")], [1, 0]], np.zeros((0, 0))])
def test_malformed_matrices_rejected(bad):
    with pytest.raises(InputError):
        Space.from_matrix(bad)


def test_infinite_entries_allowed():
    space = Space.from_matrix([[0, math.inf], [1, 0]])
    assert classify(space) is SpaceClass.QUASI_METRIC


# -- from_digraph ---------------------------------------------------------------


def test_digraph_three_cycle(three_cycle):
    np.testing.assert_array_equal(three_cycle.dist, [[0, 1, 2], [2, 0, 1], [1, 2, 0]])


def test_digraph_isolated_vertices():
    d = from_digraph(WeightedDigraph("ab", [])).dist
    assert d[0, 1] == math.inf and d[1, 0] == math.inf


def test_digraph_parallel_arrows_take_minimum():
    d = from_digraph(WeightedDigraph("ab", [("a", "b", 1), ("a", "b", 5)])).dist
    assert d[0, 1] == 1


def test_digraph_negative_weight_rejected():
    with pytest.raises(InputError):
        WeightedDigraph("ab", [("a", "b", -1)])


@given(
    st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.floats(0, 20, allow_nan=False)),
            max_size=12,
        ).map(lambda arrows: (n, arrows))
    )
)
def test_digraph_always_pseudo_quasi_metric(data):
    n, arrows = data
    space = from_digraph(WeightedDigraph(range(n), arrows))
    assert classify(space) is not SpaceClass.INVALID


# -- quotient --------------------------------------------------------------------


def test_quotient_zero_matrix():
    q, proj = quotient_zero_pairs(Space.from_matrix([[0, 0], [0, 0]]))
    assert q.n == 1 and proj == [0, 0]


def test_quotient_of_quasi_metric_is_identity(k10_quasi):
    q, proj = quotient_zero_pairs(k10_quasi)
    np.testing.assert_array_equal(q.dist, k10_quasi.dist)
    assert proj == [0, 1, 2]


def test_quotient_three_points():
    q, proj = quotient_zero_pairs(Space.from_matrix([[0, 0, 1], [0, 0, 1], [1, 1, 0]]))
    np.testing.assert_array_equal(q.dist, [[0, 1], [1, 0]])
    assert proj == [0, 0, 1]


@settings(max_examples=40, deadline=None)
@given(pq_spaces(max_n=4))
def test_quotient_is_gh_zero(space):
    q, _ = quotient_zero_pairs(space)
    assert gromov_hausdorff(space, q).value == 0


# -- Gromov-Hausdorff -------------------------------------------------------------


def test_gh_identical(three_cycle):
    gh = gromov_hausdorff(three_cycle, three_cycle)
    assert gh.value == 0 and gh.exact


def test_gh_two_point_spaces():
    assert count_correspondences(2, 2) == 7
    assert gh_bruteforce([[0, 2], [2, 0]], [[0, 4], [4, 0]]) == 1.0
    assert gromov_hausdorff(sym2(2), sym2(4)).value == 1.0


def test_gh_point_vs_segment():
    gh = gromov_hausdorff(sym2(1), Space.from_matrix([[0]]))
    assert gh.value == 0.5
    assert gh.witness.pairs == {(0, 0), (1, 0)}


def test_gh_respects_order_of_points(two_point_asym):
    # the reversed space is isometric through the swap
    rev = Space.from_matrix([[0, 3], [1, 0]])
    gh = gromov_hausdorff(two_point_asym, rev)
    assert gh.value == 0 and gh.witness.pairs == {(0, 1), (1, 0)}


@settings(max_examples=60, deadline=None)
@given(pq_spaces(max_n=3, allow_inf=True), pq_spaces(max_n=3, allow_inf=True))
def test_gh_matches_bruteforce(x, y):
    gh = gromov_hausdorff(x, y)
    assert gh.value == gh_bruteforce(x.dist.tolist(), y.dist.tolist())
    assert correspondence_distortion(x, y, gh.witness) / 2 == gh.value


@settings(max_examples=15, deadline=None)
@given(pq_spaces(min_n=2, max_n=2), pq_spaces(min_n=4, max_n=4))
def test_gh_matches_bruteforce_uneven(x, y):
    assert gromov_hausdorff(x, y).value == gh_bruteforce(x.dist.tolist(), y.dist.tolist())


@settings(max_examples=30, deadline=None)
@given(pq_spaces(max_n=3), pq_spaces(max_n=3), pq_spaces(max_n=3))
def test_gh_pseudo_metric(x, y, z):
    xy = gromov_hausdorff(x, y).value
    assert xy == gromov_hausdorff(y, x).value
    assert gromov_hausdorff(x, z).value <= xy + gromov_hausdorff(y, z).value + 1e-9


def test_gh_size_guard_gives_flagged_upper_bound():
    rng = np.random.default_rng(3)
    from quasiph.sampling import random_pseudo_quasi_metric

    x = random_pseudo_quasi_metric(rng, 7)
    y = random_pseudo_quasi_metric(rng, 6)
    gh = gromov_hausdorff(x, y)
    assert not gh.exact
    assert gh.value == correspondence_distortion(x, y, gh.witness) / 2
    assert gh.value >= gromov_hausdorff(x, y, max_exact=7).value


def test_correspondence_must_cover():
    with pytest.raises(InputError):
        Correspondence([(0, 0)], 2, 1)
    with pytest.raises(InputError):
        Correspondence([(0, 0)], 1, 2)


# -- expansion -----------------------------------------------------------------


def test_expand_point_vs_two_points():
    ep = expand_pair(Space.from_matrix([[0]]), sym2(1), Correspondence([(0, 0), (0, 1)], 1, 2))
    assert ep.x_tilde.n == ep.y_tilde.n == 2
    np.testing.assert_array_equal(ep.x_tilde.dist, np.zeros((2, 2)))
    assert ep.embed_x == (0,) and ep.embed_y == (0, 1)


def test_expand_diagonal_is_trivial(three_cycle):
    ep = expand_pair(three_cycle, three_cycle, Correspondence.diagonal(3))
    np.testing.assert_array_equal(ep.x_tilde.dist, three_cycle.dist)
    np.testing.assert_array_equal(ep.y_tilde.dist, three_cycle.dist)
    assert ep.psi == (0, 1, 2)


def test_expand_from_gh_witness_two_point():
    x, y = sym2(2), sym2(4)
    gh = gromov_hausdorff(x, y)
    ep = expand_pair(x, y, gh.witness)
    assert expansion_violations(ep, x, y, 2 * gh.value) == []
    # the bound is tight: a smaller slack breaks part 3
    assert expansion_violations(ep, x, y, 2 * gh.value - 0.5)


def test_expand_tie_breaking_uses_minimum_index():
    x = Space.from_matrix([[0, 1], [1, 0]])
    y = Space.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    m = Correspondence([(0, 2), (0, 1), (1, 0), (1, 2)], 2, 3)
    ep = expand_pair(x, y, m)
    assert ep.pairs == ((0, 1), (0, 2), (1, 0), (1, 2))
    assert [ep.pairs[a] for a in ep.embed_x] == [(0, 1), (1, 0)]
    assert [ep.pairs[a] for a in ep.embed_y] == [(1, 0), (0, 1), (0, 2)]


@settings(max_examples=40, deadline=None)
@given(pq_spaces(max_n=4, allow_inf=True), pq_spaces(max_n=4, allow_inf=True))
def test_expansion_invariants_from_witness(x, y):
    gh = gromov_hausdorff(x, y)
    ep = expand_pair(x, y, gh.witness)
    assert expansion_violations(ep, x, y, 2 * gh.value) == []
    assert classify(ep.x_tilde) is not SpaceClass.INVALID
    assert gromov_hausdorff(ep.x_tilde, x, max_exact=9).value == 0


# -- symmetrization --------------------------------------------------------------


def test_fa_k10_quasi(k10_quasi):
    f = symmetrize_fa(k10_quasi, 0.75)
    assert f[0, 1] == 3.25 and f[1, 2] == 3.25 and f[0, 2] == 10


def test_fa_metric_unchanged():
    d = Space.from_matrix([[0, 0.1, 0.3], [0.1, 0, 0.7], [0.3, 0.7, 0]])
    for a in (0, 0.3, 0.5, 0.9, 1):
        np.testing.assert_array_equal(symmetrize_fa(d, a), d.dist)


def test_fa_midpoint(two_point_asym):
    assert symmetrize_fa(Space.from_matrix([[0, 1], [3, 0]]), 0.5)[0, 1] == 2


def test_fa_infinity_conventions():
    space = Space.from_matrix([[0, 1], [math.inf, 0]])
    assert symmetrize_fa(space, 1)[0, 1] == 1
    assert symmetrize_fa(space, 0)[0, 1] == math.inf
    assert symmetrize_fa(space, 0.5)[0, 1] == math.inf


def test_fa_out_of_range():
    with pytest.raises(InputError):
        symmetrize_fa(sym2(1), 1.5)


@given(pq_spaces(allow_inf=True), st.floats(0, 1), st.floats(0, 1))
def test_fa_monotone_in_a(space, a, b):
    a, b = sorted((a, b))
    assert np.all(symmetrize_fa(space, b) <= symmetrize_fa(space, a) + 1e-9)


def test_fa_triangle_k10_quasi(k10_quasi):
    rep = check_fa_triangle(k10_quasi, 0.75)
    assert not rep.holds
    assert rep.triple == (0, 1, 2)
    assert rep.lhs == 6.5 and rep.rhs == 10


@given(pq_spaces(max_n=5, allow_inf=True), st.sampled_from([0, 0.25, 0.5]))
def test_fa_triangle_holds_for_small_a(space, a):
    assert check_fa_triangle(space, a).holds


@given(pq_spaces(max_n=5))
def test_fa_of_metric_with_a1_holds(space):
    metric = Space(space.labels, np.maximum(space.dist, space.dist.T))
    assert check_fa_triangle(metric, 1).holds


@settings(max_examples=40, deadline=None)
@given(pq_spaces(max_n=4), pq_spaces(max_n=4), st.sampled_from([0, 0.25, 0.5]))
def test_gh_under_fa_bounded_by_gh(x, y, a):
    assert gromov_hausdorff(fa_space(x, a), fa_space(y, a)).value <= gromov_hausdorff(x, y).value + 1e-9
