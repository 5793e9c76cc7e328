"""Finite pseudo-quasi-metric spaces.

A space is a labelled square matrix of extended non-negative reals.  Entries
may be ``inf`` (unreachable pairs of a digraph); arithmetic on them follows
``inf + r = inf`` and, inside :func:`symmetrize_fa`, ``0 * inf = 0``.

Besides construction and classification this module holds the two
correspondence-based tools used by the stability checks: the exact
Gromov-Hausdorff distance and the expansion of a pair of spaces along a
correspondence into two equally sized spaces joined by a bijection.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import InputError, InvalidSpaceError

TOL = 1e-9

DEFAULT_MAX_EXACT = 5


class SpaceClass(enum.Enum):
    METRIC = "metric"
    QUASI_METRIC = "quasi-metric"
    PSEUDO_METRIC = "pseudo-metric"
    PSEUDO_QUASI_METRIC = "pseudo-quasi-metric"
    INVALID = "invalid"


@dataclass(frozen=True)
class Violation:
    """A failed axiom.

    ``prop`` is 1 (non-negativity), 4 (triangle inequality) or 0 (non-zero
    diagonal entry).  ``witness`` holds the offending indices: a pair for
    properties 0 and 1, a triple ``(x, y, z)`` with ``d(x,z) > d(x,y) + d(y,z)``
    for property 4.
    """

    prop: int
    witness: tuple[int, ...]
    message: str


@dataclass(frozen=True, eq=False)
class Space:
    """Points ``labels`` with ``dist[i, j] = d(labels[i], labels[j])``.

    Construction only checks the shape and rejects NaN; whether the matrix is
    actually a pseudo-quasi-metric is answered by :func:`classify` and
    enforced by :meth:`validate`.
    """

    labels: tuple
    dist: np.ndarray

    def __post_init__(self):
        dist = np.array(self.dist, dtype=np.float64)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InputError(f"distance matrix must be square, got shape {dist.shape}")
        if dist.shape[0] == 0:
            raise InputError("a space needs at least one point")
        if np.isnan(dist).any():
            raise InputError("distance matrix contains NaN")
        labels = tuple(self.labels)
        if len(labels) != dist.shape[0]:
            raise InputError(f"{len(labels)} labels for a {dist.shape[0]}x{dist.shape[0]} matrix")
        if len(set(labels)) != len(labels):
            raise InputError("point labels must be distinct")
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_matrix(cls, dist, labels: Sequence[Hashable] | None = None) -> "Space":
        dist = np.asarray(dist, dtype=np.float64)
        if labels is None:
            labels = tuple(range(dist.shape[0])) if dist.ndim == 2 else ()
        return cls(tuple(labels), dist)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Space(n={self.n}, labels={list(self.labels)!r})"

    def validate(self) -> "Space":
        """Return ``self`` or raise :class:`InvalidSpaceError` naming the failed property."""
        v = find_violation(self)
        if v is not None:
            raise InvalidSpaceError(v.message, v)
        return self


def find_violation(space: Space, tol: float = TOL) -> Violation | None:
    d = space.dist
    lab = space.labels
    neg = np.argwhere(d < -tol)
    if len(neg):
        i, j = (int(v) for v in neg[0])
        return Violation(1, (i, j), f"non-negativity fails: d({lab[i]}, {lab[j]}) = {float(d[i, j])!r}")
    diag = np.flatnonzero(np.abs(np.diag(d)) > tol)
    if len(diag):
        i = int(diag[0])
        return Violation(0, (i, i), f"non-zero self distance: d({lab[i]}, {lab[i]}) = {float(d[i, i])!r}")
    # through[i, j, k] = d(i, j) + d(j, k)
    with np.errstate(invalid="ignore"):
        through = d[:, :, None] + d[None, :, :]
        bad = np.argwhere(d[:, None, :] > through + tol)
    if len(bad):
        i, j, k = (int(v) for v in bad[0])
        return Violation(
            4,
            (i, j, k),
            f"triangle inequality fails at ({lab[i]}, {lab[j]}, {lab[k]}): "
            f"d({lab[i]},{lab[k]}) = {float(d[i, k])!r} > {float(d[i, j])!r} + {float(d[j, k])!r}",
        )
    return None


def is_symmetric(space: Space, tol: float = TOL) -> bool:
    d = space.dist
    both_inf = np.isinf(d) & np.isinf(d.T)
    with np.errstate(invalid="ignore"):
        close = np.abs(d - d.T) <= tol
    return bool(np.all(close | both_inf))


def is_separated(space: Space, tol: float = TOL) -> bool:
    zero = (space.dist <= tol) & (space.dist.T <= tol)
    np.fill_diagonal(zero, False)
    return not zero.any()


def classify(space: Space) -> SpaceClass:
    """Strongest class the matrix belongs to.

    Precedence is metric, quasi-metric, pseudo-metric, pseudo-quasi-metric;
    ``INVALID`` when non-negativity, the triangle inequality or a zero
    diagonal fails.
    """
    if find_violation(space) is not None:
        return SpaceClass.INVALID
    sym = is_symmetric(space)
    sep = is_separated(space)
    if sym and sep:
        return SpaceClass.METRIC
    if sep:
        return SpaceClass.QUASI_METRIC
    if sym:
        return SpaceClass.PSEUDO_METRIC
    return SpaceClass.PSEUDO_QUASI_METRIC


@dataclass(frozen=True)
class WeightedDigraph:
    vertices: tuple
    arrows: tuple  # (src, dst, weight) with src/dst drawn from vertices

    def __init__(self, vertices: Iterable[Hashable], arrows: Iterable[tuple]):
        vertices = tuple(vertices)
        arrows = tuple((s, t, float(w)) for s, t, w in arrows)
        known = set(vertices)
        for s, t, w in arrows:
            if s not in known or t not in known:
                raise InputError(f"arrow {s!r} -> {t!r} uses an unknown vertex")
            if not w >= 0:
                raise InputError(f"arrow {s!r} -> {t!r} has negative or NaN weight {w!r}")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "arrows", arrows)


def from_digraph(g: WeightedDigraph) -> Space:
    """Shortest-path quasi-metric of a weighted digraph; ``inf`` where no path exists."""
    n = len(g.vertices)
    index = {v: i for i, v in enumerate(g.vertices)}
    d = np.full((n, n), np.inf)
    for s, t, w in g.arrows:
        i, j = index[s], index[t]
        d[i, j] = min(d[i, j], w)
    np.fill_diagonal(d, 0.0)
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return Space(g.vertices, d)


def quotient_zero_pairs(space: Space) -> tuple[Space, list[int]]:
    """Identify points at distance zero in both directions.

    Returns the quotient (lowest index of each class kept, in order) and the
    projection ``proj[i]`` = index in the quotient of the class of point ``i``.
    """
    space.validate()
    d = space.dist
    n = space.n
    proj = [-1] * n
    reps = []
    for i in range(n):
        if proj[i] >= 0:
            continue
        proj[i] = len(reps)
        for j in range(i + 1, n):
            if proj[j] < 0 and d[i, j] == 0 and d[j, i] == 0:
                proj[j] = len(reps)
        reps.append(i)
    sub = d[np.ix_(reps, reps)]
    return Space([space.labels[i] for i in reps], sub), proj


# -- Gromov-Hausdorff ------------------------------------------------------


@dataclass(frozen=True)
class Correspondence:
    """Pairs ``(i, j)`` of indices into X and Y covering both index sets."""

    pairs: frozenset
    n_x: int
    n_y: int

    def __init__(self, pairs: Iterable[tuple[int, int]], n_x: int, n_y: int):
        pairs = frozenset((int(i), int(j)) for i, j in pairs)
        for i, j in pairs:
            if not (0 <= i < n_x and 0 <= j < n_y):
                raise InputError(f"pair {(i, j)} out of range for sizes {n_x}, {n_y}")
        if {i for i, _ in pairs} != set(range(n_x)):
            raise InputError("correspondence does not cover every point of X")
        if {j for _, j in pairs} != set(range(n_y)):
            raise InputError("correspondence does not cover every point of Y")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "n_x", n_x)
        object.__setattr__(self, "n_y", n_y)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    @classmethod
    def diagonal(cls, n: int) -> "Correspondence":
        return cls(((i, i) for i in range(n)), n, n)


def distortion(a, b):
    """Elementwise ``|a - b|`` with ``|inf - inf| = 0``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        out = np.abs(a - b)
    return np.where(np.isinf(a) & np.isinf(b), 0.0, out)


def correspondence_distortion(x: Space, y: Space, m: Correspondence) -> float:
    """``max |d_X(x1, x2) - d_Y(y1, y2)|`` over ordered pairs of pairs in ``m``."""
    pairs = m.sorted_pairs()
    xi = [i for i, _ in pairs]
    yj = [j for _, j in pairs]
    return float(distortion(x.dist[np.ix_(xi, xi)], y.dist[np.ix_(yj, yj)]).max())


@dataclass(frozen=True)
class GHResult:
    value: float
    witness: Correspondence
    exact: bool


class _OutOfBudget(Exception):
    pass


def _pair_conflicts(x: Space, y: Space) -> np.ndarray:
    """``c[p, q]`` = distortion between pairs p = (i, j), q = (k, l), both orders.

    Pairs are flattened as ``p = i * |Y| + j``.
    """
    n, m = x.n, y.n
    delta = distortion(x.dist[:, None, :, None], y.dist[None, :, None, :]).reshape(n * m, n * m)
    return np.maximum(delta, delta.T)


def _covering_clique(compat: list[int], n: int, m: int, budget: int | None) -> list[int] | None:
    """Search for a set of pairwise-compatible pairs covering all of X and Y."""
    x_masks = [sum(1 << (i * m + j) for j in range(m)) for i in range(n)]
    y_masks = [sum(1 << (i * m + j) for i in range(n)) for j in range(m)]
    failed = set()
    nodes = 0

    def search(cand, ux, uy):
        nonlocal nodes
        if not ux and not uy:
            return []
        key = (cand, ux, uy)
        if key in failed:
            return None
        nodes += 1
        if budget is not None and nodes > budget:
            raise _OutOfBudget
        best = None
        for i in range(n):
            if ux >> i & 1:
                opts = cand & x_masks[i]
                if best is None or opts.bit_count() < best.bit_count():
                    best = opts
        for j in range(m):
            if uy >> j & 1:
                opts = cand & y_masks[j]
                if best is None or opts.bit_count() < best.bit_count():
                    best = opts
        if best:
            options = []
            while best:
                low = best & -best
                p = low.bit_length() - 1
                best ^= low
                i, j = divmod(p, m)
                covers_both = (ux >> i & 1) and (uy >> j & 1)
                options.append((not covers_both, p))
            for _, p in sorted(options):
                i, j = divmod(p, m)
                rest = search(cand & compat[p], ux & ~(1 << i), uy & ~(1 << j))
                if rest is not None:
                    return [p] + rest
        failed.add(key)
        return None

    return search((1 << (n * m)) - 1, (1 << n) - 1, (1 << m) - 1)


def gromov_hausdorff(x: Space, y: Space, max_exact: int = DEFAULT_MAX_EXACT, budget: int = 20_000) -> GHResult:
    """Gromov-Hausdorff distance between two finite pseudo-quasi-metric spaces.

    A correspondence with distortion at most ``eps`` is exactly a set of pairs
    that are pairwise compatible at level ``eps`` and cover both spaces, so the
    optimum is found by bisecting over the finitely many pairwise distortion
    values and searching for a covering clique at each level.  The returned
    witness attains the minimum.

    When either space has more than ``max_exact`` points the clique search is
    capped at ``budget`` nodes per level and the result is an upper bound with
    ``exact=False``.
    """
    x.validate()
    y.validate()
    n, m = x.n, y.n
    exact = n <= max_exact and m <= max_exact
    conflicts = _pair_conflicts(x, y)
    levels = np.unique(conflicts)
    best = None

    def attempt(level):
        ok = conflicts <= level
        compat = [int(sum(1 << q for q in np.flatnonzero(row))) for row in ok]
        try:
            return _covering_clique(compat, n, m, None if exact else budget)
        except _OutOfBudget:
            return None

    lo, hi = 0, len(levels) - 1
    best = attempt(levels[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        found = attempt(levels[mid])
        if found is not None:
            hi, best = mid, found
        else:
            lo = mid + 1
    witness = Correspondence((divmod(p, m) for p in best), n, m)
    value = correspondence_distortion(x, y, witness) / 2
    return GHResult(value, witness, exact)


# -- Expansion -------------------------------------------------------------


@dataclass(frozen=True)
class ExpansionPair:
    """Two spaces of equal size built from a correspondence, one point per pair.

    Point ``a`` of both expanded spaces corresponds to ``pairs[a] = (i, j)``;
    the bijection ``psi`` is therefore the identity on indices.  ``pi_x[a]``
    is the X index ``i``; ``embed_x[i]`` is the expanded index of ``(i, s_i)``
    with ``s_i`` the smallest partner of ``i``.  The Y side is symmetric.
    """

    pairs: tuple
    x_tilde: Space
    y_tilde: Space
    psi: tuple
    pi_x: tuple
    pi_y: tuple
    embed_x: tuple
    embed_y: tuple

    def projection_x(self) -> list[int]:
        """Idempotent self-map of the expanded X sending each point to its representative."""
        return [self.embed_x[i] for i in self.pi_x]

    def projection_y(self) -> list[int]:
        return [self.embed_y[j] for j in self.pi_y]


def expand_pair(x: Space, y: Space, m: Correspondence) -> ExpansionPair:
    if m.n_x != x.n or m.n_y != y.n:
        raise InputError("correspondence sizes do not match the spaces")
    pairs = tuple(m.sorted_pairs())
    index = {p: a for a, p in enumerate(pairs)}
    xi = [i for i, _ in pairs]
    yj = [j for _, j in pairs]
    s = {i: min(j for k, j in pairs if k == i) for i in range(x.n)}
    r = {j: min(i for i, k in pairs if k == j) for j in range(y.n)}
    labels = [(x.labels[i], y.labels[j]) for i, j in pairs]
    x_tilde = Space(labels, x.dist[np.ix_(xi, xi)])
    y_tilde = Space(labels, y.dist[np.ix_(yj, yj)])
    return ExpansionPair(
        pairs=pairs,
        x_tilde=x_tilde,
        y_tilde=y_tilde,
        psi=tuple(range(len(pairs))),
        pi_x=tuple(xi),
        pi_y=tuple(yj),
        embed_x=tuple(index[(i, s[i])] for i in range(x.n)),
        embed_y=tuple(index[(r[j], j)] for j in range(y.n)),
    )


def expansion_violations(ep: ExpansionPair, x: Space, y: Space, eps: float, tol: float = TOL) -> list[str]:
    """Entrywise check of the four expansion properties; returns failure messages."""
    failures = []
    for name, tilde, base, pi, proj in (
        ("X", ep.x_tilde, x, ep.pi_x, ep.projection_x()),
        ("Y", ep.y_tilde, y, ep.pi_y, ep.projection_y()),
    ):
        via_rep = tilde.dist[np.ix_(proj, proj)]
        via_base = base.dist[np.ix_(pi, pi)]
        if not np.array_equal(tilde.dist, via_rep) or not np.array_equal(tilde.dist, via_base):
            failures.append(f"expanded {name} distances are not pulled back along the projection")
        if any(proj[a] != proj[proj[a]] for a in range(len(proj))):
            failures.append(f"{name} projection is not idempotent")
    psi = list(ep.psi)
    inv = np.argsort(psi)
    dx, dy = ep.x_tilde.dist, ep.y_tilde.dist
    with np.errstate(invalid="ignore"):
        if np.any(dy[np.ix_(psi, psi)] > dx + eps + tol):
            failures.append("d_Y~(psi x, psi x') <= d_X~(x, x') + eps fails")
        if np.any(dx[np.ix_(inv, inv)] > dy + eps + tol):
            failures.append("d_X~(psi^-1 y, psi^-1 y') <= d_Y~(y, y') + eps fails")
    return failures


# -- symmetrization ----------------------------------------------------------


def symmetrize_fa(space: Space, a: float) -> np.ndarray:
    """``a * min(d(x,y), d(y,x)) + (1 - a) * max(d(x,y), d(y,x))``.

    Symmetric pairs are returned unchanged (bitwise), so a metric is a fixed
    point for every ``a``.
    """
    if not 0 <= a <= 1:
        raise InputError(f"a must lie in [0, 1], got {a!r}")
    d = space.dist
    lo = np.minimum(d, d.T)
    hi = np.maximum(d, d.T)
    if a == 0:
        out = hi.copy()
    elif a == 1:
        out = lo.copy()
    else:
        out = a * lo + (1 - a) * hi
    out = np.where(lo == hi, lo, out)
    np.fill_diagonal(out, 0.0)
    return out


@dataclass(frozen=True)
class TriangleReport:
    holds: bool
    triple: tuple[int, int, int] | None = None
    lhs: float | None = None  # f(x,y) + f(y,z)
    rhs: float | None = None  # f(x,z)


def check_fa_triangle(space: Space, a: float, tol: float = TOL) -> TriangleReport:
    f = symmetrize_fa(space, a)
    with np.errstate(invalid="ignore"):
        through = f[:, :, None] + f[None, :, :]
        bad = np.argwhere(f[:, None, :] > through + tol)
    if not len(bad):
        return TriangleReport(True)
    i, j, k = (int(v) for v in bad[0])
    return TriangleReport(False, (i, j, k), float(f[i, j] + f[j, k]), float(f[i, k]))


def fa_space(space: Space, a: float) -> Space:
    """The symmetrized matrix as a space on the same labels."""
    return Space(space.labels, symmetrize_fa(space, a))
