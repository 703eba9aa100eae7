from __future__ import annotations

from fractions import Fraction
from itertools import accumulate

import pytest
from conftest import program
from hypothesis import given, settings
from hypothesis import strategies as st

from aara.ast import BoolV, IntV, ListV, PairV
from aara.frontend import elaborate
from aara.semantics import EvalError, FuelExhausted, evaluate, parse_value, watermark


def run(name, literal, entry=None, **kw):
    p = program(name)
    return evaluate(p, entry or list(p.functions)[-1], parse_value(literal), **kw)


def test_parse_value():
    assert parse_value("([1,2], -3)") == PairV(ListV((IntV(1), IntV(2))), IntV(-3))
    assert parse_value("(1, 2, true)") == PairV(IntV(1), PairV(IntV(2), BoolV(True)))
    assert parse_value("[[],[0]]") == ListV((ListV(()), ListV((IntV(0),))))
    with pytest.raises(ValueError):
        parse_value("[1,")


def test_subset_sum():
    r = run("subsetSum", "([1,2,3], 5)")
    assert r.value == BoolV(True)
    assert (r.q, r.q_prime) == (22, 0)
    assert run("subsetSum", "([1,2,3], 7)").value == BoolV(False)


def test_snoc():
    r = run("snoc", "(0, [1,2])")
    assert r.value == parse_value("[1,2,0]")
    assert r.q == 3


def test_ball_bins():
    r = run("ballBins3", "[1,2]")
    assert len(r.value.items) == 9
    assert r.q == 9
    assert r.value.items[0] == parse_value("([2,1],[],[])")


def test_sub_sum_with_duplicates():
    assert run("subSum1", "([2,2,2], 4)").value == BoolV(False)
    assert run("subSum1", "([1,2,3], 4)").value == BoolV(True)
    # all distinct: 4·2^n − n − 3 operations
    assert run("subSum1", "([1,2,3], 100)").q == 4 * 8 - 3 - 3


def test_log_length():
    r = run("log", "[1,2,3,4,5,6,7,8]")
    assert r.value == parse_value("[1,2,4]")
    assert r.q == 0


def test_type_checked_argument():
    with pytest.raises(EvalError):
        run("snoc", "[1,2]")


def test_unknown_entry():
    with pytest.raises(EvalError):
        evaluate(program("snoc"), "nope", IntV(1))


def test_fuel_exhaustion_carries_watermark():
    with pytest.raises(FuelExhausted) as exc:
        run("loop", "0", fuel=1000)
    assert exc.value.outcome.exhausted
    assert exc.value.outcome.watermark > 0


@pytest.mark.parametrize("f", [10**2, 10**3, 10**4])
def test_divergent_watermark_grows(f):
    p = program("loop")
    assert watermark(p, "loop", IntV(0), 2 * f).watermark > watermark(p, "loop", IntV(0), f).watermark


def test_negative_input_terminates():
    r = run("loop", "-5")
    assert r.value == IntV(-5) and r.q == 0


@pytest.mark.parametrize(
    "name, literal",
    [("subsetSum", "([1,2,3,4], 3)"), ("snoc", "(1, [1,2,3])"), ("ballBins3", "[1,2,3]"), ("subSum1", "([3,1,3], 4)")],
)
def test_terminating_watermark_equals_q(name, literal):
    p = program(name)
    entry = list(p.functions)[-1]
    w = watermark(p, entry, parse_value(literal), 10**6)
    assert not w.exhausted
    assert w.watermark == run(name, literal).q


def test_deep_recursion():
    xs = "[" + ",".join(["1"] * 5000) + "]"
    assert run("snoc", f"(0, {xs})").q == 5001


# the high-water mark of a straight-line tick sequence is its largest prefix sum


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=12))
def test_tick_sequence_watermark(amounts):
    body = "; ".join(f"tick {a}" for a in amounts) + "; x + 0"
    r = evaluate(elaborate(f"let f x = {body}"), "f", IntV(0))
    peak = max([Fraction(0), *accumulate(amounts)])
    assert r.q == peak
    assert r.q - r.q_prime == sum(amounts)
