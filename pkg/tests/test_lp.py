from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from aara.lp import (
    Constraint,
    Infeasible,
    LinearProgram,
    LinExpr,
    LpSyntaxError,
    Optimal,
    Unbounded,
    emit,
    lexicographic_solve,
    parse,
    solve,
)

x, y, z = LinExpr.var("x"), LinExpr.var("y"), LinExpr.var("z")


def lp_of(*rows, objective=LinExpr(), free=()):
    lp = LinearProgram()
    for v in free:
        lp.add_var(v, free=True)
    for lhs, rel, rhs in rows:
        lp.constrain(lhs, rel, rhs, origin=f"{rel} {rhs}")
    lp.objective = objective
    for v in objective.terms:
        lp.add_var(v)
    return lp


def test_hand_solvable():
    r = solve(lp_of((x, ">=", 3), (y - x, ">=", 2), objective=x + y))
    assert isinstance(r, Optimal)
    assert r.assignment == {"x": 3, "y": 5}
    assert r.objective == 8


def test_contradiction_is_infeasible_with_certificate():
    lp = lp_of((x, ">=", 1), (-x, ">=", 0))
    r = solve(lp)
    assert isinstance(r, Infeasible)
    assert r.rows == [0, 1]
    # the multipliers combine the rows into 0 >= positive
    combo = {v: sum(r.multipliers[i] * lp.constraints[i].coeffs.get(v, 0) for i in r.rows) for v in ("x",)}
    assert combo["x"] == 0
    assert sum(r.multipliers[i] * lp.constraints[i].rhs for i in r.rows) > 0


def test_unbounded_ray():
    r = solve(lp_of((x - y, ">=", 0), objective=-x))
    assert isinstance(r, Unbounded)
    assert r.ray["x"] > 0


def test_free_variables_go_negative():
    lp = lp_of((z, ">=", -4), objective=z, free=("z",))
    assert solve(lp).assignment["z"] == -4


def test_equalities_and_redundant_rows():
    r = solve(lp_of((x + y, "=", 2), (2 * x + 2 * y, "=", 4), (x, "<=", 1), objective=-x + y))
    assert isinstance(r, Optimal)
    assert r.assignment == {"x": 1, "y": 1}


def test_beale_cycling_instance_terminates():
    x4, x5, x6, x7 = (LinExpr.var(f"x{i}") for i in range(4, 8))
    lp = lp_of(
        (Fraction(1, 4) * x4 - 8 * x5 - x6 + 9 * x7, "<=", 0),
        (Fraction(1, 2) * x4 - 12 * x5 - Fraction(1, 2) * x6 + 3 * x7, "<=", 0),
        (x6, "<=", 1),
        objective=Fraction(-3, 4) * x4 + 20 * x5 - Fraction(1, 2) * x6 + 6 * x7,
    )
    r = solve(lp)
    assert isinstance(r, Optimal)
    assert r.objective == Fraction(-5, 4)


def test_lexicographic_single_objective_matches_solve():
    lp = lp_of((x + y, ">=", 2), objective=x + 2 * y)
    assert lexicographic_solve(lp, [lp.objective]).assignment == solve(lp).assignment


def test_lexicographic_tie_break_picks_minimal_slack():
    # x + y = 1 leaves the first objective indifferent; the second prefers small z
    lp = lp_of((x + y, ">=", 1), (z - x, ">=", 0))
    r = lexicographic_solve(lp, [x + y, z])
    assert r.objectives == [1, 0]
    assert r.assignment == {"x": 0, "y": 1, "z": 0}


def test_determinism():
    lp = lp_of((x + y + z, ">=", 3), (x - z, ">=", -1), objective=x + y + z)
    a, b = solve(lp), solve(lp)
    assert a.assignment == b.assignment and a.stats.pivots == b.stats.pivots


def test_text_round_trip():
    lp = lp_of((Fraction(3, 2) * x - y, ">=", 0), (x + z, "=", 4), (y, "<=", 7), objective=x + 10 * y, free=("z",))
    text = emit(lp)
    assert "c1: 3/2 x - y >= 0;" in text
    assert "free z;" in text
    again = parse(text)
    assert emit(again) == text
    assert solve(again).assignment == solve(lp).assignment


def test_parse_lp_solve_style():
    lp = parse("/* demo */ max: 2a + 3b;\nr1: a + b <= 4;\n-a >= -3;\n")
    r = solve(lp)
    assert r.assignment == {"a": 0, "b": 4}


def test_parse_errors():
    with pytest.raises(LpSyntaxError):
        parse("c1: x >= 0;")
    with pytest.raises(LpSyntaxError):
        parse("min: x; c1: x ! 0;")


def test_constraint_holds():
    c = Constraint.of(x + y, ">=", 2)
    assert c.holds({"x": Fraction(1), "y": Fraction(1)})
    assert not c.holds({"x": Fraction(1)})


# ------------------------------------------------------------------ scipy oracle

small = st.integers(-4, 4)


@st.composite
def random_lps(draw):
    nvars = draw(st.integers(1, 4))
    names = [f"v{i}" for i in range(nvars)]
    rows = []
    for _ in range(draw(st.integers(1, 5))):
        coeffs = [draw(small) for _ in names]
        rel = draw(st.sampled_from([">=", "<=", "="]))
        rows.append((coeffs, rel, draw(small)))
    obj = [draw(st.integers(0, 5)) for _ in names]
    return names, rows, obj


@settings(max_examples=150, deadline=None)
@given(random_lps())
def test_agrees_with_scipy(case):
    names, rows, obj = case
    lp = LinearProgram(list(names))
    for coeffs, rel, rhs in rows:
        lp.add(Constraint({n: Fraction(c) for n, c in zip(names, coeffs) if c}, rel, Fraction(rhs)))
    lp.objective = LinExpr({n: c for n, c in zip(names, obj)})
    mine = solve(lp)

    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for coeffs, rel, rhs in rows:
        if rel == "=":
            a_eq.append(coeffs)
            b_eq.append(rhs)
        elif rel == "<=":
            a_ub.append(coeffs)
            b_ub.append(rhs)
        else:
            a_ub.append([-c for c in coeffs])
            b_ub.append(-rhs)
    ref = linprog(obj, A_ub=a_ub or None, b_ub=b_ub or None, A_eq=a_eq or None, b_eq=b_eq or None, method="highs")
    if ref.status == 2:
        assert isinstance(mine, Infeasible)
    else:
        assert ref.status == 0  # nonnegative costs keep every feasible case bounded
        assert isinstance(mine, Optimal)
        assert abs(float(mine.objective) - ref.fun) < 1e-7
        assert not lp.violations(mine.assignment)
