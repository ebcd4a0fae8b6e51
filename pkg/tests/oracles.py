"""Independent reference computations used only by the tests."""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from dfjmtz.instance import FractionalPoint, Tour, convex_combination, point_from_tour
from dfjmtz.lift import ModifiedGraph


def floyd_warshall(g: ModifiedGraph) -> list[list]:
    n = g.n
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = Fraction(0)
    for i in range(n):
        for j in range(n):
            w = g.w[i][j]
            if w is not None and w < d[i][j]:
                d[i][j] = w
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def simple_cycles(g: ModifiedGraph):
    """Every simple directed cycle as (closed node tuple, weight); brute force."""
    n = g.n
    for size in range(2, n + 1):
        for nodes in itertools.combinations(range(1, n + 1), size):
            first, rest = nodes[0], nodes[1:]
            for perm in itertools.permutations(rest):
                cyc = (first, *perm, first)
                ws = [g.weight(a, b) for a, b in zip(cyc, cyc[1:])]
                if all(w is not None for w in ws):
                    yield cyc, sum(ws)


def scipy_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=None):
    # presolve can label unbounded models infeasible
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs",
                  options={"presolve": False})
    return res


def _arcs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def _degree_rows(n, nv):
    arcs = _arcs(n)
    rows, rhs = [], []
    for v in range(1, n + 1):
        rows.append([1.0 if (k < len(arcs) and arcs[k][0] == v) else 0.0 for k in range(nv)])
        rows.append([1.0 if (k < len(arcs) and arcs[k][1] == v) else 0.0 for k in range(nv)])
        rhs += [1.0, 1.0]
    return rows, rhs


def scipy_dfj_bound(inst) -> float:
    """DFJ relaxation with every subtour row written out (no separation)."""
    n = inst.n
    arcs = _arcs(n)
    c = [float(inst.cost(i, j)) for i, j in arcs]
    a_eq, b_eq = _degree_rows(n, len(arcs))
    a_ub, b_ub = [], []
    for size in range(2, n):
        for q in itertools.combinations(range(2, n + 1), size):
            s = set(q)
            a_ub.append([1.0 if (i in s and j in s) else 0.0 for i, j in arcs])
            b_ub.append(size - 1.0)
    res = scipy_lp(c, a_ub, b_ub, a_eq, b_eq, [(0, 1)] * len(arcs))
    assert res.status == 0
    return res.fun


def scipy_mtz_bound(inst) -> float:
    n = inst.n
    arcs = _arcs(n)
    na = len(arcs)
    nv = na + n
    c = [float(inst.cost(i, j)) for i, j in arcs] + [0.0] * n
    a_eq, b_eq = _degree_rows(n, nv)
    a_ub, b_ub = [], []
    for k, (i, j) in enumerate(arcs):
        if j == 1:
            continue
        row = [0.0] * nv
        row[na + i - 1] += 1
        row[na + j - 1] -= 1
        row[k] = float(n)
        a_ub.append(row)
        b_ub.append(n - 1.0)
    res = scipy_lp(c, a_ub, b_ub, a_eq, b_eq, [(0, 1)] * na + [(None, None)] * n)
    assert res.status == 0
    return res.fun


# --- point generators ---------------------------------------------------------


def random_derangement(n: int, rng: random.Random) -> list[int]:
    """Permutation of 1..n without fixed points, as ``perm[i - 1] = successor of i``."""
    while True:
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        if all(perm[i] != i + 1 for i in range(n)):
            return perm


def permutation_point(perm: list[int]) -> FractionalPoint:
    n = len(perm)
    x = [[Fraction(0)] * n for _ in range(n)]
    for i, j in enumerate(perm):
        x[i][j - 1] = Fraction(1)
    return FractionalPoint(n, x)


def derangement_mixture(n: int, k: int, rng: random.Random) -> FractionalPoint:
    """Degree-feasible point; usually violates some subtour inequality."""
    pts = [permutation_point(random_derangement(n, rng)) for _ in range(k)]
    raw = [rng.randint(1, 50) for _ in range(k)]
    return convex_combination(pts, [Fraction(r, sum(raw)) for r in raw])


def forced_subtour_point(n: int, size: int, rng: random.Random) -> tuple[FractionalPoint, tuple]:
    """x = 1 on a cycle through ``size`` nodes of {2..n}; the rest is a tour mixture."""
    sub = rng.sample(range(2, n + 1), size)
    rest = [v for v in range(1, n + 1) if v not in sub]
    x = [[Fraction(0)] * n for _ in range(n)]
    for a, b in zip(sub, sub[1:] + sub[:1]):
        x[a - 1][b - 1] = Fraction(1)
    k = rng.randint(1, 4)
    raw = [rng.randint(1, 50) for _ in range(k)]
    for r in raw:
        others = [v for v in rest if v != 1]
        rng.shuffle(others)
        cyc = [1] + others
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            x[a - 1][b - 1] += Fraction(r, sum(raw))
    return FractionalPoint(n, x), tuple(sub)


def mixed_weight_graph(n: int, rng: random.Random, density: float = 0.7) -> ModifiedGraph:
    """Mixed-sign weights without negative cycles: nonnegative base plus a potential difference."""
    pot = [rng.randint(-20, 20) for _ in range(n)]
    w = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and (i == 0 or rng.random() < density):
                w[i][j] = Fraction(rng.randint(0, 15)) + pot[i] - pot[j]
    return ModifiedGraph(n, tuple(tuple(r) for r in w))


def planted_negative_cycle_graph(n: int, rng: random.Random) -> ModifiedGraph:
    """Nonnegative random graph (source reaches everything) plus one negative cycle."""
    w = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and (i == 0 or rng.random() < 0.5):
                w[i][j] = Fraction(rng.randint(0, 10))
    size = rng.randint(2, n)
    cyc = rng.sample(range(n), size)
    weights = [Fraction(rng.randint(-10, 10)) for _ in range(size)]
    excess = sum(weights)
    if excess >= 0:
        weights[0] -= excess + rng.randint(1, 5)
    for (a, b), wt in zip(zip(cyc, cyc[1:] + cyc[:1]), weights):
        w[a][b] = wt
    return ModifiedGraph(n, tuple(tuple(r) for r in w))


def half_half_point() -> FractionalPoint:
    a = point_from_tour(Tour((1, 2, 3, 4)))
    b = point_from_tour(Tour((1, 3, 2, 4)))
    return convex_combination([a, b], [Fraction(1, 2), Fraction(1, 2)])


def two_cycle_point() -> FractionalPoint:
    x = [[0] * 4 for _ in range(4)]
    x[1][2] = x[2][1] = x[0][3] = x[3][0] = 1
    return FractionalPoint(4, x)
