from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aara.ast import INT, IntV, ListV, PairV
from aara.potential import (
    ABase,
    AList,
    Annotation,
    APair,
    BasisConfig,
    add,
    basis_value,
    closed_form,
    delta,
    demote,
    domain_generators,
    in_domain,
    phi,
    shift,
    stirling2,
    type_from_json,
    type_to_json,
    value_potential,
)

from conftest import BINOMIAL1, MIXED, MIXED_DEMOTED, STIRLING1, STIRLING2

PROPERTY = settings(max_examples=200, deadline=None)


def brute_stirling(n: int, k: int) -> int:
    """Count set partitions of range(n) into k nonempty blocks via restricted growth strings."""
    if n == 0:
        return 1 if k == 0 else 0
    count = 0
    for rgs in itertools.product(range(k), repeat=n):
        if rgs[0] != 0:
            continue
        if all(rgs[i] <= max(rgs[:i]) + 1 for i in range(1, n)) and max(rgs) == k - 1:
            count += 1
    return count


def configs():
    kinds = st.sampled_from(["binomial", "stirling", "mixed"])
    deg = st.integers(1, 4)
    return st.builds(BasisConfig, kinds, deg, deg).filter(lambda c: c.dim <= 24)


def demoted_configs():
    return st.builds(lambda k, b: BasisConfig("mixed", k, b, True), st.integers(1, 4), st.integers(1, 4))


coeff = st.fractions(min_value=0, max_value=20, max_denominator=12)


@st.composite
def annotations(draw, cfgs=configs()):
    cfg = draw(cfgs)
    return Annotation(cfg, tuple(draw(coeff) for _ in cfg.indices))


@st.composite
def admissible(draw, cfgs=demoted_configs()):
    """Nonnegative combinations of the domain generators, which may have negative p0k."""
    cfg = draw(cfgs)
    total = Annotation.zero(cfg)
    for g in domain_generators(cfg):
        total = add(total, g.map(lambda c, w=draw(coeff): c * w))
    return total


# ------------------------------------------------------------------ combinatorics


@pytest.mark.parametrize("n,k", [(n, k) for n in range(7) for k in range(n + 2)])
def test_stirling_matches_partition_count(n, k):
    assert stirling2(n, k) == brute_stirling(n, k)


def test_stirling_known_values():
    assert stirling2(4, 2) == 7
    assert stirling2(0, 0) == 1
    assert stirling2(3, 0) == 0
    assert all(stirling2(n + 1, 2) == 2**n - 1 for n in range(11))


def test_basis_values():
    assert basis_value(MIXED, (1, 1), 3) == 21
    assert basis_value(BasisConfig("binomial", 2), 2, 4) == 6
    for cfg in (BINOMIAL1, STIRLING2, MIXED, BasisConfig("mixed", 3, 3)):
        assert all(basis_value(cfg, i, 0) == 0 for i in cfg.indices)


def test_mixed_index_order_is_b_major():
    assert BasisConfig("mixed", 2, 1).indices == ((0, 1), (0, 2), (1, 0), (1, 1), (1, 2))


def test_config_validation():
    with pytest.raises(ValueError):
        BasisConfig("stirling", demotion=True)
    with pytest.raises(ValueError):
        BasisConfig("binomial", poly_degree=0)
    with pytest.raises(ValueError):
        BasisConfig("fourier")


# ------------------------------------------------------------------ worked values


def test_shift_examples():
    assert shift(Annotation.of(STIRLING1, [3])).coeffs == (6,)
    assert shift(Annotation.of(STIRLING2, [2, 2])).coeffs == (6, 6)
    assert shift(Annotation.of(MIXED, [0, 2, 1])).coeffs == (1, 6, 2)
    assert shift(Annotation.of(MIXED_DEMOTED, [-1, 4, 0])).coeffs == (-1, 8, 0)


def test_delta_examples():
    assert delta(Annotation.of(STIRLING1, [3])) == 3
    assert delta(Annotation.of(MIXED, [0, 2, 1])) == 3
    assert delta(Annotation.of(BINOMIAL1, [1])) == 1


def test_phi_examples():
    assert phi(3, Annotation.of(STIRLING1, [3])) == 21
    assert phi(3, Annotation.of(MIXED, [0, 2, 1])) == 35


def test_add_examples():
    three = Annotation.of(STIRLING1, [3])
    assert add(three, three).coeffs == (6,)
    two = Annotation.of(STIRLING2, [2, 2])
    assert add(add(two, two), two).coeffs == (6, 6)
    assert add(two, Annotation.zero(STIRLING2)) == two


def test_demote_examples():
    p = Annotation.from_map(MIXED_DEMOTED, {(1, 0): 4})
    assert demote(p, 1) == Annotation.from_map(MIXED_DEMOTED, {(1, 0): 3, (0, 1): 1})
    assert demote(p, 0) == p
    with pytest.raises(ValueError):
        demote(Annotation.from_map(MIXED_DEMOTED, {(1, 0): 1, (0, 1): -1}), 2)
    with pytest.raises(ValueError):
        demote(Annotation.of(MIXED, [0, 1, 0]), 1)


@pytest.mark.parametrize(
    "cfg,coeffs,text",
    [
        (STIRLING1, [3], "3·2^n − 2"),
        (STIRLING2, [2, 2], "3^n"),
        (MIXED, [0, 2, 1], "n·2^n + 2·2^n − n − 1"),
        (MIXED_DEMOTED, [-1, 4, 0], "4·2^n − n − 3"),
        (BINOMIAL1, [1], "n + 1"),
    ],
)
def test_closed_form_strings(cfg, coeffs, text):
    assert str(closed_form(Annotation.of(cfg, coeffs), 1)) == text


def test_value_potential_examples():
    l3 = ListV((IntV(1), IntV(2), IntV(3)))
    assert value_potential(l3, AList(ABase(INT), Annotation.of(STIRLING1, [3]))) == 21
    assert value_potential(ListV(()), AList(ABase(INT), Annotation.of(STIRLING1, [9]))) == 0
    pair = PairV(l3, PairV(IntV(0), l3))
    t = APair(AList(ABase(INT), Annotation.of(STIRLING1, [1])), APair(ABase(INT), AList(ABase(INT), Annotation.of(STIRLING1, [2]))))
    assert value_potential(pair, t) == 7 + 14


# ------------------------------------------------------------------ properties


@PROPERTY
@given(annotations(), st.integers(0, 25))
def test_shift_identity(p, n):
    assert phi(n + 1, p) == delta(p) + phi(n, shift(p))


@PROPERTY
@given(admissible(), st.integers(0, 25))
def test_shift_identity_relaxed_domain(p, n):
    assert phi(n + 1, p) == delta(p) + phi(n, shift(p))


@PROPERTY
@given(annotations())
def test_phi_zero_at_empty(p):
    assert phi(0, p) == 0


@PROPERTY
@given(st.one_of(annotations(), admissible()), st.integers(0, 30))
def test_monotone(p, n):
    assert in_domain(p)
    assert phi(n + 1, p) >= phi(n, p) >= 0


def random_list(draw, max_len=25):
    return ListV(tuple(IntV(0) for _ in range(draw(st.integers(0, max_len)))))


@PROPERTY
@given(st.data())
def test_sharing_additivity(data):
    cfg = data.draw(configs())
    p = data.draw(annotations(st.just(cfg)))
    q = data.draw(annotations(st.just(cfg)))
    l = random_list(data.draw)
    at = lambda a: value_potential(l, AList(ABase(INT), a))  # noqa: E731
    assert at(add(p, q)) == at(p) + at(q)


@PROPERTY
@given(st.data())
def test_subtype_monotone(data):
    q = data.draw(annotations())
    bump = data.draw(annotations(st.just(q.cfg)))
    p = add(q, bump)
    l = random_list(data.draw)
    assert value_potential(l, AList(ABase(INT), p)) >= value_potential(l, AList(ABase(INT), q))


@PROPERTY
@given(st.data())
def test_demotion_never_adds_potential(data):
    p = data.draw(admissible())
    s = p[(1, 0)] * data.draw(st.fractions(min_value=0, max_value=1, max_denominator=6))
    lowered = demote(p, s)
    assert in_domain(lowered)
    for n in range(31):
        assert phi(n, lowered) <= phi(n, p)


@PROPERTY
@given(st.data())
def test_recursive_potential_splits_spine_and_elements(data):
    """Cell-by-cell potential of a nested list equals phi of the spine plus element potentials."""
    cfg = data.draw(configs())
    outer = data.draw(annotations(st.just(cfg)))
    inner = data.draw(annotations(st.just(cfg)))
    lens = data.draw(st.lists(st.integers(0, 6), max_size=8))
    v = ListV(tuple(ListV((IntV(1),) * k) for k in lens))
    t = AList(AList(ABase(INT), inner), outer)
    assert value_potential(v, t) == phi(len(lens), outer) + sum(phi(k, inner) for k in lens)


@PROPERTY
@given(st.one_of(annotations(), admissible()), st.fractions(min_value=0, max_value=5, max_denominator=4))
def test_closed_form_agrees(p, q):
    cf = closed_form(p, q)
    for n in range(21):
        assert cf.evaluate(n) == q + phi(n, p)


@PROPERTY
@given(annotations())
def test_annotation_json_round_trip(p):
    t = AList(APair(ABase(INT), AList(ABase(INT), p)), p)
    assert type_from_json(p.cfg, type_to_json(t)) == t


def test_binomial_closed_form_is_polynomial():
    p = Annotation.of(BasisConfig("binomial", 3), [1, Fraction(1, 2), 2])
    cf = closed_form(p)
    assert all(base == 1 for _, base, _ in cf.terms)
    assert all(cf.evaluate(n) == n + Fraction(1, 2) * comb(n, 2) + 2 * comb(n, 3) for n in range(15))


def test_domain_generators_span_relaxed_cone():
    gens = domain_generators(BasisConfig("mixed", 2, 1, True))
    assert all(in_domain(g) for g in gens)
    assert any(any(c < 0 for c in g.coeffs) for g in gens)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Annotation.of(STIRLING2, [1])
