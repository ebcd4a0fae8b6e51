import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfjmtz.lp import Constraint, LpModel, Status, lp_add_constraint, lp_solve
from lp_fixtures import STATUS_FIXTURES
from oracles import scipy_lp


def test_bound_tight_minimum():
    m = LpModel(1, (1,), [((1,), ">=", 3), ((1,), "<=", 10)], [(None, None)])
    sol = lp_solve(m)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == 3 and sol.primal == (3,)


def test_unbounded_ray():
    assert lp_solve(LpModel(1, (-1,), [], [(0, None)])).status is Status.UNBOUNDED


def test_contradictory_rows_infeasible():
    m = LpModel(1, (0,), [((1,), "<=", 1), ((1,), ">=", 2)], [(None, None)])
    assert lp_solve(m).status is Status.INFEASIBLE


def test_bounds_invariant():
    with pytest.raises(ValueError):
        LpModel(1, (0,), [], [(2, 1)])
    with pytest.raises(ValueError):
        LpModel(2, (0, 0), [((1,), "<=", 1)])
    with pytest.raises(ValueError):
        Constraint((1,), "<", 1)


def test_add_constraint():
    m = LpModel(2, (1, 1))
    m1 = lp_add_constraint(m, ((1, 1), ">=", 1))
    assert len(m.constraints) == 0 and len(m1.constraints) == 1
    m2 = lp_add_constraint(m1, ((1, 1), ">=", 1))
    assert len(m2.constraints) == 2
    with pytest.raises(ValueError):
        lp_add_constraint(m, ((1, 1, 1), "<=", 1))


def test_earlier_solution_unaffected_by_added_row():
    m = LpModel(2, (-1, -1), [((1, 1), "<=", 4)])
    before = lp_solve(m)
    tightened = lp_add_constraint(m, ((1, 0), "<=", 1))
    lp_solve(tightened)
    assert lp_solve(m).objective_value == before.objective_value == -4


def test_beale_cycling_example_terminates():
    # cycles under the textbook largest-coefficient rule
    m = LpModel(
        4,
        (Fraction(-3, 4), 150, Fraction(-1, 50), 6),
        [
            ((Fraction(1, 4), -60, Fraction(-1, 25), 9), "<=", 0),
            ((Fraction(1, 2), -90, Fraction(-1, 50), 3), "<=", 0),
            ((0, 0, 1, 0), "<=", 1),
        ],
    )
    sol = lp_solve(m)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == Fraction(-1, 20)
    assert m.max_violation(sol.primal) == 0


def test_kuhn_degenerate_example():
    m = LpModel(
        4,
        (-2, -3, 1, 12),
        [
            ((-2, -9, 1, 9), "<=", 0),
            ((Fraction(1, 3), 1, Fraction(-1, 3), -2), "<=", 0),
            ((2, 3, -1, -12), "<=", 2),
        ],
    )
    sol = lp_solve(m)
    # reference optimum -2 from HiGHS
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == -2
    assert m.max_violation(sol.primal) == 0


@pytest.mark.parametrize("name,nv,obj,rows,bounds,expected", STATUS_FIXTURES, ids=[f[0] for f in STATUS_FIXTURES])
def test_status_fixtures(name, nv, obj, rows, bounds, expected):
    sol = lp_solve(LpModel(nv, obj, rows, bounds))
    assert sol.status.value == expected


def _scipy_args(m: LpModel):
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for c in m.constraints:
        row = [float(v) for v in c.coeffs]
        if c.relation == "<=":
            a_ub.append(row), b_ub.append(float(c.rhs))
        elif c.relation == ">=":
            a_ub.append([-v for v in row]), b_ub.append(-float(c.rhs))
        else:
            a_eq.append(row), b_eq.append(float(c.rhs))
    bounds = [(None if np.isinf(float(lo)) else float(lo), None if np.isinf(float(hi)) else float(hi)) for lo, hi in m.bounds]
    return dict(a_ub=a_ub or None, b_ub=b_ub or None, a_eq=a_eq or None, b_eq=b_eq or None, bounds=bounds)


def random_model(rng: random.Random, nv: int, nc: int) -> LpModel:
    rows = []
    for _ in range(nc):
        rel = rng.choice(["<=", "<=", ">=", "="])
        rows.append(([rng.randint(-4, 4) for _ in range(nv)], rel, rng.randint(-5, 10)))
    bounds = [rng.choice([(0, None), (0, rng.randint(1, 6)), (None, None), (rng.randint(-3, 0), rng.randint(1, 4)), (None, 5)])
              for _ in range(nv)]
    return LpModel(nv, [rng.randint(-5, 5) for _ in range(nv)], rows, bounds)


SCIPY_STATUS = {0: Status.OPTIMAL, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}


def test_random_models_against_scipy():
    rng = random.Random(11)
    seen = set()
    for _ in range(300):
        m = random_model(rng, rng.randint(1, 5), rng.randint(0, 5))
        sol = lp_solve(m)
        ref = scipy_lp([float(c) for c in m.objective], **_scipy_args(m))
        assert sol.status is SCIPY_STATUS[ref.status]
        seen.add(sol.status)
        if sol.status is Status.OPTIMAL:
            assert m.max_violation(sol.primal) == 0
            assert float(sol.objective_value) == pytest.approx(ref.fun, abs=1e-7)
    assert seen == set(Status)


def test_float_mode_matches_exact():
    rng = random.Random(3)
    for _ in range(100):
        m = random_model(rng, 4, 4)
        fm = LpModel(m.num_vars, [float(c) for c in m.objective],
                     [Constraint([float(a) for a in c.coeffs], c.relation, float(c.rhs)) for c in m.constraints], m.bounds)
        exact, approx = lp_solve(m), lp_solve(fm)
        assert approx.status is exact.status
        if exact.status is Status.OPTIMAL:
            assert isinstance(approx.objective_value, float)
            assert approx.objective_value == pytest.approx(float(exact.objective_value), abs=1e-7)


def test_float_mode_reports_tiny_pivots():
    m = LpModel(2, (-1.0, -1.0), [((1e-11, 0.0), "<=", 1.0), ((0.0, 1.0), "<=", 1.0)], [(0, None), (0, None)])
    sol = lp_solve(m)
    assert any(w.startswith("ConditioningWarning") for w in sol.warnings)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_optimum_invariant_under_row_permutation(seed):
    rng = random.Random(seed)
    m = random_model(rng, rng.randint(1, 4), rng.randint(1, 5))
    rows = list(m.constraints)
    rng.shuffle(rows)
    shuffled = LpModel(m.num_vars, m.objective, rows, m.bounds)
    a, b = lp_solve(m), lp_solve(shuffled)
    assert a.status is b.status
    if a.status is Status.OPTIMAL:
        assert a.objective_value == b.objective_value


def test_deterministic():
    rng = random.Random(8)
    m = random_model(rng, 5, 5)
    assert lp_solve(m) == lp_solve(m)
