"""Order-variable (MTZ) constraints ``u_i - u_j + n x_ij <= n - 1``.

The arc family is every ``(i, j)`` with ``i != j`` and ``j != 1``.  Arcs into
node 1 are left out: with them even an integral tour is infeasible, because
its closing arc would need ``u_last - u_1 + n <= n - 1``.  The ``u`` are free
(no ``1 <= u_i <= n - 1`` bounds).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._numeric import EPS, Scalar, any_float, coerce, from_text, to_text
from .dfj import arc_list, assignment_model, point_from_primal
from .instance import AtspInstance, FractionalPoint, Tour
from .lp import LpModel, Status, lp_solve


@dataclass(frozen=True)
class Potentials:
    """Node-order values; ``u[k - 1]`` belongs to node ``k``."""

    n: int
    u: tuple

    def __post_init__(self):
        u = tuple(coerce(v) for v in self.u)
        if len(u) != self.n:
            raise ValueError(f"expected {self.n} potentials, got {len(u)}")
        object.__setattr__(self, "u", u)

    def __getitem__(self, node: int) -> Scalar:
        return self.u[node - 1]

    @property
    def is_float(self) -> bool:
        return any_float(self.u)

    def shifted(self, delta) -> "Potentials":
        return Potentials(self.n, [v + delta for v in self.u])

    def to_dict(self) -> dict:
        return {"u": [to_text(v) for v in self.u]}

    @classmethod
    def from_dict(cls, data: dict) -> "Potentials":
        u = [from_text(v) for v in data["u"]]
        return cls(len(u), u)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Potentials":
        return cls.from_dict(json.loads(text))


def mtz_arcs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i, j in arc_list(n) if j != 1]


def mtz_slack(p: FractionalPoint, u: Potentials, i: int, j: int) -> Scalar:
    if i == j:
        raise ValueError("MTZ constraints are defined for i != j only")
    if j == 1:
        raise ValueError("arcs into node 1 are excluded from the MTZ family")
    n = p.n
    return (n - 1) - (u[i] - u[j] + n * p.value(i, j))


def mtz_check(p: FractionalPoint, u: Potentials) -> Optional[tuple[int, int, Scalar]]:
    """First violated arc in lexicographic order as ``(i, j, slack)``, or None."""
    if u.n != p.n:
        raise ValueError("point and potentials disagree on n")
    tol = EPS if (p.is_float or u.is_float) else 0
    for i, j in mtz_arcs(p.n):
        s = mtz_slack(p, u, i, j)
        if s < -tol:
            return i, j, s
    return None


def visit_order_potentials(t: Tour) -> Potentials:
    """``u = 0`` at node 1 and ``k - 1`` at the k-th visited node."""
    u = [Fraction(0)] * t.n
    for pos, node in enumerate(t.order):
        u[node - 1] = Fraction(pos)
    return Potentials(t.n, u)


def mtz_model(inst: AtspInstance) -> LpModel:
    """Arc variables (lexicographic order) followed by ``u_1..u_n``."""
    n = inst.n
    arcs = arc_list(n)
    na = len(arcs)
    model = assignment_model(inst, extra_vars=n, extra_bounds=[(None, None)] * n)
    index = {a: k for k, a in enumerate(arcs)}
    rows = list(model.constraints)
    for i, j in mtz_arcs(n):
        row = [0] * model.num_vars
        row[na + i - 1] += 1
        row[na + j - 1] -= 1
        row[index[(i, j)]] = n
        rows.append((row, "<=", n - 1))
    return LpModel(model.num_vars, model.objective, rows, model.bounds)


def mtz_lp_bound(inst: AtspInstance) -> tuple[Scalar, FractionalPoint, Potentials]:
    """Minimise cost over degree constraints, 0 <= x <= 1 and the MTZ rows, u free."""
    n = inst.n
    na = n * (n - 1)
    sol = lp_solve(mtz_model(inst))
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"MTZ relaxation LP returned {sol.status.value}")
    point = point_from_primal(n, sol.primal, inst.is_float)
    return sol.objective_value, point, Potentials(n, sol.primal[na:])
