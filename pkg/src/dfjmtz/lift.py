"""Lift a DFJ point to MTZ potentials through shortest paths.

Arc ``(i, j)`` gets weight ``(n - 1) - n * x_ij``; arcs into node 1 are
dropped.  If the graph has no negative cycle, ``u_j = -dist(1, j)`` satisfies
every MTZ row.  Otherwise the negative cycle avoids node 1 and its node set is
a violated DFJ set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._numeric import Scalar
from .dfj import CutCertificate, dfj_lhs
from .instance import FractionalPoint
from .mtz import Potentials


@dataclass(frozen=True)
class ModifiedGraph:
    """Dense digraph on nodes 1..n; ``w[i - 1][j - 1] is None`` means no arc."""

    n: int
    w: tuple

    def weight(self, i: int, j: int):
        return self.w[i - 1][j - 1]

    def arcs(self):
        """Present arcs ``(i, j, w)`` in lexicographic order."""
        for i in range(self.n):
            for j, wij in enumerate(self.w[i]):
                if wij is not None:
                    yield i + 1, j + 1, wij


class NegativeCycleError(Exception):
    """Raised by :func:`bellman_ford`; carries a simple cycle ``(v0, ..., v0)``."""

    def __init__(self, cycle: tuple[int, ...], weight):
        super().__init__(f"negative cycle {cycle} with weight {weight}")
        self.cycle = cycle
        self.weight = weight


def build_modified_graph(p: FractionalPoint) -> ModifiedGraph:
    n = p.n
    w = tuple(
        tuple(None if (i == j or j == 0) else (n - 1) - n * p.x[i][j] for j in range(n))
        for i in range(n)
    )
    return ModifiedGraph(n, w)


def cycle_weight(g: ModifiedGraph, cycle: Sequence[int]):
    total = Fraction(0)
    for a, b in zip(cycle, cycle[1:]):
        wab = g.weight(a, b)
        if wab is None:
            raise ValueError(f"arc ({a}, {b}) is not in the graph")
        total += wab
    return total


def _canonical(cycle: list[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    body = cycle[k:] + cycle[:k]
    return tuple(body + [body[0]])


def _pred_cycle(pred: list) -> Optional[list[int]]:
    """Any cycle in the predecessor graph, as forward node order (0-indexed)."""
    n = len(pred)
    state = [0] * n  # 0 unseen, 1 on current walk, 2 done
    for start in range(n):
        walk = []
        v = start
        while v is not None and state[v] == 0:
            state[v] = 1
            walk.append(v)
            v = pred[v]
        if v is not None and state[v] == 1:
            back = walk[walk.index(v):]
            # back follows predecessors, so reverse it for arc direction
            return back[::-1]
        for u in walk:
            state[u] = 2
    return None


def bellman_ford(g: ModifiedGraph, source: int = 1) -> list:
    """Shortest distances from ``source`` (``math.inf`` if unreachable).

    Arcs are relaxed in lexicographic order.  Raises
    :class:`NegativeCycleError` with a simple negative cycle when one is
    reachable from ``source``.
    """
    n = g.n
    arcs = [(i - 1, j - 1, w) for i, j, w in g.arcs()]
    dist: list = [math.inf] * n
    dist[source - 1] = 0 * arcs[0][2] if arcs else Fraction(0)
    pred: list = [None] * n
    rounds = 0
    while True:
        rounds += 1
        changed = False
        for i, j, w in arcs:
            di = dist[i]
            if di != math.inf and di + w < dist[j]:
                dist[j] = di + w
                pred[j] = i
                changed = True
        if not changed:
            return dist
        if rounds >= n:
            # the predecessor graph eventually closes a cycle; every such cycle is negative
            found = _pred_cycle(pred)
            if found is not None:
                cycle = _canonical([v + 1 for v in found])
                weight = cycle_weight(g, cycle)
                if not weight < 0:
                    raise AssertionError(f"predecessor cycle {cycle} has weight {weight}")
                raise NegativeCycleError(cycle, weight)


@dataclass(frozen=True)
class LiftResult:
    """Either ``potentials`` (success) or a negative ``cycle`` with its weight."""

    potentials: Optional[Potentials] = None
    cycle: Optional[tuple[int, ...]] = None
    cycle_weight: Optional[Scalar] = None

    @property
    def ok(self) -> bool:
        return self.potentials is not None


def lift_point(p: FractionalPoint) -> LiftResult:
    g = build_modified_graph(p)
    try:
        dist = bellman_ford(g, 1)
    except NegativeCycleError as exc:
        return LiftResult(cycle=exc.cycle, cycle_weight=exc.weight)
    return LiftResult(potentials=Potentials(p.n, [-d for d in dist]))


def cycle_to_cut(p: FractionalPoint, cycle: Sequence[int]) -> CutCertificate:
    """Turn a negative cycle of the modified graph into a violated DFJ set."""
    cycle = tuple(cycle)
    if len(cycle) < 3 or cycle[0] != cycle[-1]:
        raise ValueError("cycle must be closed, e.g. (2, 3, 2)")
    body = cycle[:-1]
    if len(set(body)) != len(body):
        raise ValueError(f"cycle {cycle} is not simple")
    if 1 in body:
        raise ValueError("cycle passes through node 1, whose incoming arcs are excluded")
    weight = cycle_weight(build_modified_graph(p), cycle)
    if not weight < 0:
        raise ValueError(f"cycle {cycle} has nonnegative modified weight {weight}")
    lhs = dfj_lhs(p, body)
    return CutCertificate(frozenset(body), lhs, lhs - (len(body) - 1))

