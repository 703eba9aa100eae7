from __future__ import annotations

from conftest import STIRLING1, program
from hypothesis import given, settings
from hypothesis import strategies as st

from aara.ast import TBase, TList, TPair, value_has_type
from aara.harness import HarnessConfig, count_inputs, enumerate_inputs, inputs_by_length, max_length, run_harness
from aara.report import report

INT = TBase("int")
LIST = TList(INT)


def test_enumerate_small():
    vals = list(enumerate_inputs(LIST, 2, 1))
    assert len(vals) == 1 + 3 + 9
    assert str(vals[0]) == "[]"
    assert len(set(vals)) == len(vals)


def test_enumerate_value_range():
    vals = list(enumerate_inputs(TPair(LIST, INT), 1, (0, 1)))
    assert len(vals) == (1 + 2) * 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2))
def test_count_matches_enumeration(n, v):
    t = TPair(LIST, TPair(INT, TList(LIST)))
    if count_inputs(t, n, v) > 20000:
        return
    vals = list(enumerate_inputs(t, n, v))
    assert len(vals) == count_inputs(t, n, v)
    assert all(value_has_type(x, t) and max_length(x) <= n for x in vals)


def test_inputs_by_length_caps_and_is_deterministic():
    a = list(inputs_by_length(LIST, 6, 3, per_length=20, seed=1))
    b = list(inputs_by_length(LIST, 6, 3, per_length=20, seed=1))
    assert a == b
    lengths = [max_length(v) for v in a]
    assert lengths.count(1) == 7  # exhaustive below the cap
    assert lengths.count(6) == 20  # sampled above it
    assert list(inputs_by_length(LIST, 6, 3, per_length=20, seed=2)) != a


def test_harness_subset_sum_tight():
    p = program("subsetSum")
    f = report(p, STIRLING1).get("subsetSum")
    r = run_harness(p, f, HarnessConfig(max_size=5, values=2, per_length=30))
    assert not r.violations and not r.exhausted
    assert len(r.tight) == len(r.checks)
    assert "0 violations" in r.summary()
