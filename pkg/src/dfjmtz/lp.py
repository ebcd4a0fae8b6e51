"""Dense two-phase primal simplex with Bland's rule.

Works over exact rationals (``Fraction``) or floats.  The model is minimised;
every constraint is rewritten as ``a.y <= b`` over nonnegative variables ``y``
(equalities become two inequalities, free variables are split), then solved
on a dense tableau.  Pivots only touch rows with a nonzero entry in the pivot
column, which keeps the sparse relaxation models fast enough in exact mode.
Exact pivoting uses gmpy2 rationals when available; results are returned as
``Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from ._numeric import EPS, Scalar, any_float, coerce

try:
    from gmpy2 import mpq as _exact
except ImportError:  # pragma: no cover
    _exact = Fraction

PIVOT_WARN = 1e-10
PIVOT_MIN = 1e-12
RELATIONS = ("<=", "=", ">=")


class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Scalar

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(coerce(v) for v in self.coeffs))
        object.__setattr__(self, "rhs", coerce(self.rhs))

    def activity(self, values: Sequence) -> Scalar:
        return sum((a * v for a, v in zip(self.coeffs, values) if a), Fraction(0))

    def violation(self, values: Sequence) -> Scalar:
        """Amount by which ``values`` violates this row (0 when satisfied)."""
        lhs = self.activity(values)
        if self.relation == "<=":
            return max(lhs - self.rhs, 0)
        if self.relation == ">=":
            return max(self.rhs - lhs, 0)
        return abs(lhs - self.rhs)


def _bound(v, default):
    if v is None:
        return default
    if isinstance(v, float) and math.isinf(v):
        return v
    return coerce(v)


@dataclass(frozen=True)
class LpModel:
    """``minimize objective.x`` subject to ``constraints`` and per-variable bounds.

    ``bounds`` defaults to ``[0, +inf)`` for every variable; ``None`` or
    ``math.inf``/``-math.inf`` mean unbounded on that side.
    """

    num_vars: int
    objective: tuple
    constraints: tuple = ()
    bounds: tuple | None = None

    def __post_init__(self):
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length must equal num_vars")
        object.__setattr__(self, "objective", tuple(coerce(v) for v in self.objective))
        rows = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints)
        for row in rows:
            if len(row.coeffs) != self.num_vars:
                raise ValueError(f"constraint has {len(row.coeffs)} coefficients, expected {self.num_vars}")
        object.__setattr__(self, "constraints", rows)
        bounds = self.bounds if self.bounds is not None else [(0, None)] * self.num_vars
        if len(bounds) != self.num_vars:
            raise ValueError("need one (lower, upper) pair per variable")
        bounds = tuple((_bound(lo, -math.inf), _bound(hi, math.inf)) for lo, hi in bounds)
        for k, (lo, hi) in enumerate(bounds):
            if lo > hi:
                raise ValueError(f"variable {k}: lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "bounds", bounds)

    @property
    def is_float(self) -> bool:
        scalars = list(self.objective)
        for c in self.constraints:
            scalars.extend(c.coeffs)
            scalars.append(c.rhs)
        for lo, hi in self.bounds:
            scalars += [v for v in (lo, hi) if not (isinstance(v, float) and math.isinf(v))]
        return any_float(scalars)

    def max_violation(self, values: Sequence) -> Scalar:
        worst = Fraction(0)
        for c in self.constraints:
            worst = max(worst, c.violation(values))
        for v, (lo, hi) in zip(values, self.bounds):
            worst = max(worst, lo - v, v - hi)
        return worst


@dataclass
class LpSolution:
    status: Status
    objective_value: Scalar | None = None
    primal: tuple | None = None
    iterations: int = 0
    warnings: list[str] = field(default_factory=list)


def lp_add_constraint(m: LpModel, row) -> LpModel:
    """Return a new model with ``row`` appended; ``m`` is left untouched."""
    row = row if isinstance(row, Constraint) else Constraint(*row)
    if len(row.coeffs) != m.num_vars:
        raise ValueError(f"row has {len(row.coeffs)} coefficients, expected {m.num_vars}")
    return LpModel(m.num_vars, m.objective, m.constraints + (row,), m.bounds)


class _Tableau:
    def __init__(self, rows, basis, float_mode, max_iter):
        self.rows = rows
        self.basis = basis
        self.float_mode = float_mode
        self.tol = EPS if float_mode else 0
        self.pivot_tol = PIVOT_MIN if float_mode else 0
        self.iterations = 0
        self.max_iter = max_iter
        self.warnings: list[str] = []

    def pivot(self, r: int, j: int, obj: list):
        prow = self.rows[r]
        piv = prow[j]
        if self.float_mode and abs(piv) < PIVOT_WARN:
            self.warnings.append(f"ConditioningWarning: pivot magnitude {abs(piv):.3e} at iteration {self.iterations}")
        nz = [k for k, v in enumerate(prow) if v]
        for k in nz:
            prow[k] = prow[k] / piv
        for row in self.rows + [obj]:
            if row is prow:
                continue
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
                if self.float_mode:
                    for k in nz:
                        if abs(row[k]) < 1e-13:
                            row[k] = 0.0
                row[j] = 0 * f
        self.basis[r] = j
        self.iterations += 1
        if self.iterations > self.max_iter:
            raise RuntimeError(f"simplex exceeded {self.max_iter} pivots")

    def optimize(self, obj: list, ncols: int) -> bool:
        """Run Bland's-rule pivots on ``obj``; False means unbounded."""
        tol = self.tol
        while True:
            enter = next((j for j in range(ncols) if obj[j] < -tol), None)
            if enter is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a > self.pivot_tol:
                    ratio = row[-1] / a
                    if best is None:
                        best = (ratio, r)
                        continue
                    bratio, br = best
                    if ratio < bratio - tol or (abs(ratio - bratio) <= tol and self.basis[r] < self.basis[br]):
                        best = (ratio, r)
            if best is None:
                return False
            self.pivot(best[1], enter, obj)


def lp_solve(m: LpModel, max_iter: int = 200_000) -> LpSolution:
    float_mode = m.is_float
    conv = float if float_mode else _exact
    zero = conv(0)
    inf = math.inf

    # x_k = offset_k + sum(sign * y_col) over the columns of variable k
    columns: list[tuple[int, int]] = []
    offsets = []
    upper_rows = []
    for k, (lo, hi) in enumerate(m.bounds):
        if lo != -inf:
            offsets.append(conv(lo))
            columns.append((k, 1))
            if hi != inf:
                upper_rows.append((len(columns) - 1, conv(hi) - conv(lo)))
        elif hi != inf:
            offsets.append(conv(hi))
            columns.append((k, -1))
        else:
            offsets.append(zero)
            columns.append((k, 1))
            columns.append((k, -1))
    ny = len(columns)

    # every row as (dense coeffs over y, rhs) meaning coeffs.y <= rhs
    leq: list[tuple[list, Scalar]] = []
    for c in m.constraints:
        coeffs = [zero] * ny
        for col, (k, sign) in enumerate(columns):
            a = c.coeffs[k]
            if a:
                coeffs[col] = conv(a) * sign
        rhs = conv(c.rhs) - sum((conv(a) * offsets[k] for k, a in enumerate(c.coeffs) if a), zero)
        if c.relation in ("<=", "="):
            leq.append((coeffs, rhs))
        if c.relation in (">=", "="):
            leq.append(([-v for v in coeffs], -rhs))
    for col, cap in upper_rows:
        coeffs = [zero] * ny
        coeffs[col] = conv(1)
        leq.append((coeffs, cap))

    nrows = len(leq)
    art_rows = [r for r, (_, b) in enumerate(leq) if b < 0]
    ncols = ny + nrows + len(art_rows)
    rows = []
    basis = []
    art_index = {r: ny + nrows + t for t, r in enumerate(art_rows)}
    for r, (coeffs, b) in enumerate(leq):
        row = coeffs + [zero] * (nrows + len(art_rows)) + [b]
        row[ny + r] = conv(1)
        if b < 0:
            row = [-v for v in row]
            row[art_index[r]] = conv(1)
            basis.append(art_index[r])
        else:
            basis.append(ny + r)
        rows.append(row)

    tab = _Tableau(rows, basis, float_mode, max_iter)
    tol = tab.tol

    if art_rows:
        obj = [zero] * (ncols + 1)
        for j in art_index.values():
            obj[j] = conv(1)
        for r in art_rows:
            for k, v in enumerate(rows[r]):
                if v:
                    obj[k] -= v
        tab.optimize(obj, ncols)
        if -obj[-1] > tol:
            return LpSolution(Status.INFEASIBLE, iterations=tab.iterations, warnings=tab.warnings)
        # drive remaining (zero-valued) artificials out of the basis
        keep = []
        for r in range(len(tab.rows)):
            if tab.basis[r] >= ny + nrows:
                k = next((k for k in range(ny + nrows) if abs(tab.rows[r][k]) > tab.pivot_tol), None)
                if k is None:
                    continue  # redundant row
                tab.pivot(r, k, obj)
            keep.append(r)
        tab.rows = [tab.rows[r][:ny + nrows] + [tab.rows[r][-1]] for r in keep]
        tab.basis = [tab.basis[r] for r in keep]
    ncols = ny + nrows

    cost = [zero] * ncols
    for col, (k, sign) in enumerate(columns):
        cost[col] = conv(m.objective[k]) * sign
    obj = cost + [zero]
    for r, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            row = tab.rows[r]
            for k, v in enumerate(row):
                if v:
                    obj[k] -= cb * v
    if not tab.optimize(obj, ncols):
        return LpSolution(Status.UNBOUNDED, iterations=tab.iterations, warnings=tab.warnings)

    y = [zero] * ncols
    for r, b in enumerate(tab.basis):
        y[b] = tab.rows[r][-1]
    x = list(offsets)
    for col, (k, sign) in enumerate(columns):
        if y[col]:
            x[k] += sign * y[col]
    if not float_mode:
        x = [Fraction(int(v.numerator), int(v.denominator)) for v in x]
    value = sum((c * v for c, v in zip(m.objective, x) if c), 0.0 if float_mode else Fraction(0))
    return LpSolution(Status.OPTIMAL, value, tuple(x), tab.iterations, tab.warnings)
