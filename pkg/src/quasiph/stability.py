"""Barcodes per construction and Gromov-Hausdorff stability checks.

Two independent checks are offered.  :func:`check_stability` compares
barcodes: the bottleneck distance in every dimension must not exceed twice
the Gromov-Hausdorff distance.  :func:`check_complex_interleaving` works one
level down, on the filtrations of the expanded spaces, and checks that the
bijection between them shifts every cell by at most the given amount in
both directions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import GuardExceeded, InputError
from .filtrations import build_ot_filtration, digraph_filtration
from .persistence import PersistenceDiagram, bottleneck, ot_diagram
from .scc import scc_barcode
from .spaces import DEFAULT_MAX_EXACT, TOL, GHResult, Space, expand_pair, gromov_hausdorff

CONSTRUCTIONS = ("fa", "dir", "scc", "poset")
OT_CONSTRUCTIONS = ("fa", "dir", "poset")


def _check_tag(construction: str, a: float | None, allowed=CONSTRUCTIONS) -> None:
    if construction not in allowed:
        raise InputError(f"unknown construction {construction!r}; expected one of {', '.join(allowed)}")
    if construction == "fa" and a is None:
        raise InputError("construction 'fa' needs the parameter a")


def compute_barcode(space: Space, construction: str, max_dim: int = 1, a: float | None = None) -> PersistenceDiagram:
    """Persistence diagram of ``space`` under one of the four constructions.

    ``scc`` always yields dimension 0 only; the others report ``0..max_dim``.
    """
    _check_tag(construction, a)
    if construction == "scc":
        return scc_barcode(digraph_filtration(space))
    k = build_ot_filtration(space, construction, max_dim + 1, a=a, normalized=True)
    return ot_diagram(k, max_dim)


@dataclass(frozen=True)
class StabilityReport:
    construction: str
    dims: tuple
    d_gh: float
    bottlenecks: dict
    passed: bool
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "params": dict(self.params),
            "dims": list(self.dims),
            "dGH": self.d_gh,
            "bottleneck": {str(d): v for d, v in self.bottlenecks.items()},
            "bound": 2 * self.d_gh,
            "pass": self.passed,
        }


def exact_gh(x: Space, y: Space, max_exact: int = DEFAULT_MAX_EXACT) -> GHResult:
    gh = gromov_hausdorff(x, y, max_exact=max_exact)
    if not gh.exact:
        raise GuardExceeded(f"exact Gromov-Hausdorff refused for sizes {x.n} and {y.n} (limit {max_exact})")
    return gh


def check_stability(
    x: Space,
    y: Space,
    construction: str,
    max_dim: int = 1,
    a: float | None = None,
    gh: GHResult | None = None,
    tol: float = TOL,
) -> StabilityReport:
    _check_tag(construction, a)
    if gh is None:
        gh = exact_gh(x, y)
    dims = (0,) if construction == "scc" else tuple(range(max_dim + 1))
    dx = compute_barcode(x, construction, max_dim, a)
    dy = compute_barcode(y, construction, max_dim, a)
    values = {d: bottleneck(dx, dy, d) for d in dims}
    bound = 2 * gh.value
    passed = all(v <= bound + tol for v in values.values())
    params = {"a": a} if construction == "fa" else {}
    if construction != "scc":
        params["maxdim"] = max_dim
    return StabilityReport(construction, dims, gh.value, values, passed, params)


def minimal_interleaving_shift(
    x: Space,
    y: Space,
    construction: str,
    a: float | None = None,
    dim_cap: int = 2,
    gh: GHResult | None = None,
) -> float:
    """Smallest ``eps`` for which the expanded filtrations are ``eps``-shifted images of each other.

    The expansion is built from the Gromov-Hausdorff witness; the bijection
    is the identity on expanded indices, so a cell of one filtration is
    compared with the same index tuple in the other.
    """
    _check_tag(construction, a, OT_CONSTRUCTIONS)
    if gh is None:
        gh = exact_gh(x, y)
    ep = expand_pair(x, y, gh.witness)
    kx = build_ot_filtration(ep.x_tilde, construction, dim_cap, a=a, normalized=True)
    ky = build_ot_filtration(ep.y_tilde, construction, dim_cap, a=a, normalized=True)
    worst = 0.0
    for src, dst in ((kx, ky), (ky, kx)):
        for t, v in src.cells.items():
            w = dst.value(t)
            if math.isinf(w):
                return math.inf
            worst = max(worst, w - v)
    return worst


def check_complex_interleaving(
    x: Space,
    y: Space,
    construction: str,
    eps: float,
    a: float | None = None,
    dim_cap: int = 2,
    gh: GHResult | None = None,
    tol: float = TOL,
) -> bool:
    """Whether ``psi`` maps every cell at ``t`` into the other filtration at ``t + eps``, both ways."""
    shift = minimal_interleaving_shift(x, y, construction, a=a, dim_cap=dim_cap, gh=gh)
    return shift <= eps + tol
