"""Strongly connected persistence of a digraph filtration.

The vector space at threshold ``t`` is spanned by the strongly connected
components of ``D_t``; adding arrows only merges components, so the module
is described by one bar per component of ``D_0`` that dies when its
component is absorbed by the one holding a smaller vertex index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtrations import DigraphFiltration
from .persistence import PersistenceDiagram


def tarjan(adjacency: np.ndarray) -> list[list[int]]:
    """Strongly connected components of a boolean adjacency matrix.

    Iterative Tarjan; components are returned with sorted members, ordered by
    their smallest member.
    """
    n = adjacency.shape[0]
    succ = [np.flatnonzero(adjacency[v]).tolist() for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(succ[v]):
                w = succ[v][i]
                i += 1
                if index[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return sorted(comps)


@dataclass(frozen=True)
class SccPartition:
    t: float
    classes: tuple  # tuple of sorted tuples of vertex indices

    def class_of(self, v: int) -> tuple:
        for c in self.classes:
            if v in c:
                return c
        raise KeyError(v)

    def refines(self, other: "SccPartition") -> bool:
        return all(any(set(c) <= set(o) for o in other.classes) for c in self.classes)


def scc_at(f: DigraphFiltration, t: float) -> SccPartition:
    comps = tarjan(f.arrows_at(t))
    return SccPartition(t, tuple(tuple(c) for c in comps))


@dataclass(frozen=True)
class MergeEvent:
    t: float
    survivor: int  # smallest vertex of the surviving class
    absorbed: int  # smallest vertex of the absorbed class


@dataclass(frozen=True)
class MergeTree:
    initial: SccPartition
    events: tuple

    def replay(self, t: float) -> list[set[int]]:
        """Partition at ``t`` rebuilt from the initial classes and events up to ``t``."""
        groups = {c[0]: set(c) for c in self.initial.classes}
        for e in self.events:
            if e.t > t:
                break
            groups[e.survivor] |= groups.pop(e.absorbed)
        return sorted(groups.values(), key=min)


def merge_tree(f: DigraphFiltration) -> MergeTree:
    """Sweep the distinct arrow thresholds and record every absorption."""
    initial = scc_at(f, 0.0)
    rep = {v: c[0] for c in initial.classes for v in c}
    events = []
    for t in f.thresholds():
        if t <= 0:
            continue
        for comp in scc_at(f, t).classes:
            roots = sorted({rep[v] for v in comp})
            survivor = roots[0]
            for r in roots[1:]:
                events.append(MergeEvent(t, survivor, r))
            for v in comp:
                rep[v] = survivor
    return MergeTree(initial, tuple(events))


def scc_barcode(f: DigraphFiltration) -> PersistenceDiagram:
    """Dimension-0 diagram of the strongly connected persistence module."""
    tree = merge_tree(f)
    death = {c[0]: None for c in tree.initial.classes}
    for e in tree.events:
        death[e.absorbed] = e.t
    bars = [(0.0, d) for d in death.values() if d is None or d > 0]
    return PersistenceDiagram({0: bars})
