"""Subtour elimination (DFJ) inequalities.

For ``Q`` a subset of ``{2..n}`` with ``|Q| >= 2``::

    sum_{i in Q} sum_{j in Q} x_ij <= |Q| - 1
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from ._numeric import EPS, Scalar
from .instance import AtspInstance, FractionalPoint, Tour, check_degrees
from .lp import LpModel, LpSolution, Status, lp_add_constraint, lp_solve

MAX_ENUMERATE_N = 20
MAX_BRUTE_FORCE_N = 10


class SizeError(ValueError):
    """Raised when an exhaustive routine is asked to handle too large an n."""


@dataclass(frozen=True)
class CutCertificate:
    q: frozenset
    lhs: Scalar
    violation: Scalar

    def __post_init__(self):
        object.__setattr__(self, "q", frozenset(self.q))
        if 1 in self.q:
            raise ValueError("node 1 cannot belong to a DFJ set")
        if not self.violation > 0:
            raise ValueError(f"certificate must be violated, got violation {self.violation}")

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.q))

    def to_dict(self) -> dict:
        return {"q": list(self.nodes), "lhs": str(self.lhs), "violation": str(self.violation)}


def _validate_q(n: int, q: Iterable[int]) -> tuple[int, ...]:
    nodes = tuple(sorted(set(q)))
    if 1 in nodes:
        raise ValueError("Q must not contain node 1")
    if len(nodes) < 2:
        raise ValueError("Q must contain at least 2 nodes")
    if nodes[0] < 1 or nodes[-1] > n:
        raise ValueError(f"Q must be a subset of 2..{n}")
    return nodes


def dfj_lhs(p: FractionalPoint, q: Iterable[int]) -> Scalar:
    nodes = _validate_q(p.n, q)
    idx = [v - 1 for v in nodes]
    zero = 0.0 if p.is_float else Fraction(0)
    return sum((p.x[i][j] for i in idx for j in idx), zero)


def _certificate(p: FractionalPoint, q) -> CutCertificate:
    lhs = dfj_lhs(p, q)
    return CutCertificate(frozenset(q), lhs, lhs - (len(set(q)) - 1))


def dfj_check_enumerate(p: FractionalPoint) -> Optional[CutCertificate]:
    """Check every subset of {2..n}; return a maximally violated one or None.

    Ties go to the smaller set, then to the lexicographically first one.
    """
    if p.n > MAX_ENUMERATE_N:
        raise SizeError(f"enumeration refused for n={p.n} > {MAX_ENUMERATE_N}")
    tol = EPS if p.is_float else 0
    best_q, best_v = None, None
    others = range(2, p.n + 1)
    for size in range(2, p.n):
        for q in itertools.combinations(others, size):
            idx = [v - 1 for v in q]
            lhs = sum(p.x[i][j] for i in idx for j in idx)
            v = lhs - (size - 1)
            if v > tol and (best_v is None or v > best_v):
                best_q, best_v = q, v
    if best_q is None:
        return None
    return _certificate(p, best_q)


def min_cut(p: FractionalPoint, source: int, sink: int, stop_at=None) -> tuple[Scalar, frozenset]:
    """Edmonds-Karp max flow with capacities ``x``; returns (value, sink side).

    With ``stop_at`` set, augmentation stops once the flow reaches that value
    (the returned cut is then not necessarily minimal).
    """
    n = p.n
    float_mode = p.is_float
    tol = EPS if float_mode else 0
    residual = [list(row) for row in p.x]
    s, t = source - 1, sink - 1
    flow = 0.0 if float_mode else Fraction(0)

    def bfs():
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in range(n):
                if parent[v] < 0 and residual[u][v] > tol:
                    parent[v] = u
                    if v == t:
                        return parent
                    queue.append(v)
        return parent

    while True:
        parent = bfs()
        if parent[t] < 0:
            break
        push, v = None, t
        while v != s:
            u = parent[v]
            push = residual[u][v] if push is None else min(push, residual[u][v])
            v = u
        v = t
        while v != s:
            u = parent[v]
            residual[u][v] -= push
            residual[v][u] += push
            v = u
        flow += push
        if stop_at is not None and flow >= stop_at:
            break
    reached = {v + 1 for v in range(n) if parent[v] >= 0}
    return flow, frozenset(range(1, n + 1)) - reached


def separation_mincut(p: FractionalPoint) -> Optional[CutCertificate]:
    """Exact DFJ separation for degree-feasible points.

    For degree-feasible ``x`` the DFJ left-hand side of ``Q`` equals ``|Q|``
    minus the capacity entering ``Q``, so a violated set is the sink side of
    a 1 -> k cut with capacity below 1.
    """
    if not check_degrees(p):
        raise ValueError("separation_mincut requires a degree-feasible point")
    threshold = 1 - EPS if p.is_float else 1
    for k in range(2, p.n + 1):
        value, sink_side = min_cut(p, 1, k, stop_at=threshold)
        if value < threshold:
            return _certificate(p, sink_side)
    return None


def brute_force_optimum(inst: AtspInstance) -> tuple[Scalar, Tour]:
    """Cheapest tour over all (n-1)! orders; ties go to the lexicographically first."""
    n = inst.n
    if n > MAX_BRUTE_FORCE_N:
        raise SizeError(f"brute force refused for n={n} > {MAX_BRUTE_FORCE_N}")
    c = inst.costs
    best, best_order = None, None
    for perm in itertools.permutations(range(1, n)):
        total = c[0][perm[0]] + c[perm[-1]][0]
        for a, b in zip(perm, perm[1:]):
            total += c[a][b]
        if best is None or total < best:
            best, best_order = total, perm
    return best, Tour((1, *(v + 1 for v in best_order)))


# --- LP relaxation via cutting planes ---------------------------------------


def arc_list(n: int) -> list[tuple[int, int]]:
    """All arcs (i, j), i != j, in lexicographic order (1-indexed)."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def assignment_model(inst: AtspInstance, extra_vars: int = 0, extra_bounds=()) -> LpModel:
    """Degree constraints over arc variables in [0, 1], plus optional trailing variables."""
    n = inst.n
    arcs = arc_list(n)
    nv = len(arcs) + extra_vars
    objective = [inst.cost(i, j) for i, j in arcs] + [0] * extra_vars
    rows = []
    for v in range(1, n + 1):
        out_row = [0] * nv
        in_row = [0] * nv
        for k, (i, j) in enumerate(arcs):
            if i == v:
                out_row[k] = 1
            if j == v:
                in_row[k] = 1
        rows.append((out_row, "=", 1))
        rows.append((in_row, "=", 1))
    bounds = [(0, 1)] * len(arcs) + list(extra_bounds)
    return LpModel(nv, objective, rows, bounds)


def point_from_primal(n: int, primal, float_mode: bool) -> FractionalPoint:
    x = [[0.0 if float_mode else Fraction(0)] * n for _ in range(n)]
    for k, (i, j) in enumerate(arc_list(n)):
        v = primal[k]
        if float_mode:
            v = min(1.0, max(0.0, float(v)))
        x[i - 1][j - 1] = v
    return FractionalPoint(n, x)


def dfj_row(n: int, q: Iterable[int], num_vars: int):
    members = set(q)
    row = [0] * num_vars
    for k, (i, j) in enumerate(arc_list(n)):
        if i in members and j in members:
            row[k] = 1
    return (row, "<=", len(members) - 1)


@dataclass
class CuttingPlaneResult:
    value: Scalar
    point: FractionalPoint
    history: list = field(default_factory=list)
    cuts: list = field(default_factory=list)
    model: LpModel | None = None


def dfj_cutting_plane(inst: AtspInstance, max_rounds: int = 10_000) -> CuttingPlaneResult:
    """Solve the DFJ relaxation by adding violated subtour rows until none remain.

    ``history`` records the LP value of every round (non-decreasing); ``cuts``
    the certificates of the rows added.
    """
    model = assignment_model(inst)
    float_mode = inst.is_float
    history, cuts = [], []
    seen = set()
    for _ in range(max_rounds):
        sol: LpSolution = lp_solve(model)
        if sol.status is not Status.OPTIMAL:
            raise RuntimeError(f"DFJ relaxation LP returned {sol.status.value}")
        history.append(sol.objective_value)
        point = point_from_primal(inst.n, sol.primal, float_mode)
        cert = separation_mincut(point)
        if cert is None:
            return CuttingPlaneResult(sol.objective_value, point, history, cuts, model)
        if cert.q in seen:
            raise RuntimeError(f"separation returned an already added set {cert.nodes}")
        seen.add(cert.q)
        cuts.append(cert)
        model = lp_add_constraint(model, dfj_row(inst.n, cert.q, model.num_vars))
    raise RuntimeError(f"cutting-plane loop did not converge in {max_rounds} rounds")


def dfj_lp_bound(inst: AtspInstance) -> tuple[Scalar, FractionalPoint]:
    res = dfj_cutting_plane(inst)
    return res.value, res.point
