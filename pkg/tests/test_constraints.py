from __future__ import annotations

from fractions import Fraction

import pytest
from conftest import MIXED, MIXED_DEMOTED, STIRLING1, STIRLING2, program

from aara.analysis import analyze, generate
from aara.ast import App, Tick
from aara.constraints import site_map
from aara.lp import Infeasible, LinExpr, Optimal, solve
from aara.potential import Annotation, delta, shift

# The hand-derived per-line annotations for subsetSum, ballBins3 and subSum1,
# pinned as equalities on top of the generated systems.


def sites(fname: str, prog, kind, callee=None) -> list[str]:
    return [
        s for s, n in site_map(prog[fname]) if isinstance(n, kind) and (callee is None or n.fname == callee)
    ]


def ann(prefix: str, values) -> dict[str, Fraction]:
    return {f"{prefix}.{i}": Fraction(v) for i, v in enumerate(values)}


def leaf(site: str, q, qp) -> dict[str, Fraction]:
    return {f"{site}.q": Fraction(q), f"{site}.qp": Fraction(qp)}


def solve_pinned(name, cfg, pins):
    system = generate(program(name), cfg)
    assert not system.contradictions
    missing = sorted(set(pins) - set(system.lp.variables))
    assert not missing, f"witness names not in the system: {missing}"
    for v, x in pins.items():
        system.lp.constrain(LinExpr.var(v), "=", x, origin=f"witness {v} = {x}")
    system.lp.objective = LinExpr()
    return system, solve(system.lp)


def subset_sum_witness(halves=(3, 3)):
    p = program("subsetSum")
    ticks = sites("subsetSum", p, Tick)
    calls = sites("subsetSum", p, App)
    assert len(ticks) == 3 and len(calls) == 2
    return {
        **ann("subsetSum.arg", [3]),
        "subsetSum.qin": Fraction(1),
        "subsetSum.qout": Fraction(0),
        **ann("subsetSum.share.tl#1", [halves[0]]),
        **ann("subsetSum.share.tl#2", [halves[1]]),
        **leaf(ticks[0], 1, 0),  # [] -> tick 1
        **leaf(ticks[1], 4, 3),  # hd :: tl -> tick 1
        **leaf(calls[0], 3, 2),  # withNum
        **leaf(calls[1], 2, 1),  # without
        **leaf(ticks[2], 1, 0),  # tick 1; withNum || without
    }


def test_subset_sum_witness_feasible():
    _, r = solve_pinned("subsetSum", STIRLING1, subset_sum_witness())
    assert isinstance(r, Optimal)


def test_subset_sum_tail_annotation():
    p = Annotation.of(STIRLING1, [3])
    assert shift(p).coeffs == (6,)
    assert 1 + delta(p) == 4


def test_subset_sum_underpaid_share_rejected():
    _, r = solve_pinned("subsetSum", STIRLING1, subset_sum_witness(halves=(3, 2)))
    assert isinstance(r, Infeasible)
    assert any(o.startswith("witness subsetSum.share.tl#2") for o in r.origins)


def ball_bins_witness(middle=(4, 4)):
    p = program("ballBins3")
    calls = sites("helper", p, App, "helper")
    appends = sites("helper", p, App, "append")
    ticks = sites("helper", p, Tick)
    (entry_call,) = sites("ballBins3", p, App)
    pins = {
        **ann("helper.arg.L1", [2, 2]),
        "helper.qin": Fraction(1),
        "helper.qout": Fraction(0),
        **ann("helper.share.tl#1", [2, 2]),
        **ann("helper.share.tl#2", middle),
        **ann("helper.share.tl#3", [2, 2]),
        **ann("helper.share.tl#4", [2, 2]),
        **leaf(ticks[0], 1, 0),
        **leaf(calls[0], 3, 2),
        **leaf(calls[1], 2, 1),
        **leaf(calls[2], 1, 0),
        **leaf(appends[0], 0, 0),
        **leaf(appends[1], 0, 0),
        **ann("ballBins3.arg", [2, 2]),
        "ballBins3.qin": Fraction(1),
        "ballBins3.qout": Fraction(0),
        **leaf(entry_call, 1, 0),
    }
    system = generate(p, STIRLING2)
    for v in system.lp.variables:
        if v.startswith("ballBins3.res."):
            pins[v] = Fraction(0)
    return pins


def test_ball_bins_witness_feasible():
    _, r = solve_pinned("ballBins3", STIRLING2, ball_bins_witness())
    assert isinstance(r, Optimal)


def test_ball_bins_tail_annotation():
    p = Annotation.of(STIRLING2, [2, 2])
    assert shift(p).coeffs == (6, 6)
    assert 1 + delta(p) == 3


def test_ball_bins_misbalanced_share_rejected():
    _, r = solve_pinned("ballBins3", STIRLING2, ball_bins_witness(middle=(3, 3)))
    assert isinstance(r, Infeasible)


def sub_sum_witness(arg, removed, halves, qin=1):
    """`removed` is otherNums after any weakening at the result of remove."""
    p = program("subSum1")
    ticks = sites("subSum1", p, Tick)
    (rm,) = sites("subSum1", p, App, "remove")
    calls = sites("subSum1", p, App, "subSum1")
    tail = shift(Annotation.of(MIXED, arg))
    y = [t - u for t, u in zip(tail.coeffs, (1, 0, 0))]
    return {
        **ann("subSum1.arg", arg),
        "subSum1.qin": Fraction(qin),
        "subSum1.qout": Fraction(0),
        # remove : int × L^{a+1,b,c} --d/d--> L^{a,b,c}, taken at a,b,c = the tail minus one linear unit
        **ann("remove.arg", [1, 0, 0]),
        **ann("remove.res", [0, 0, 0]),
        "remove.qin": Fraction(0),
        "remove.qout": Fraction(0),
        **ann(f"{rm}.Y0>0", y),
        **ann(f"{rm}.ret", removed),
        **ann("subSum1.share.otherNums#1", halves),
        **ann("subSum1.share.otherNums#2", halves),
        **leaf(ticks[0], 1, 0),
        **leaf(rm, 4, 4),
        **leaf(ticks[1], 4, 3),
        **leaf(calls[0], 3, 2),
        **leaf(calls[1], 2, 1),
        **leaf(ticks[2], 1, 0),
    }


def test_sub_sum_tail_annotations():
    for arg, tail in (([0, 2, 1], (1, 6, 2)), ([-1, 4, 0], (-1, 8, 0))):
        p = Annotation.of(MIXED, arg)
        assert shift(p).coeffs == tail
        assert 1 + delta(p) == 4


def test_sub_sum_witness_feasible():
    # otherNums : L^{0,6,2} weakened to L^{0,4,2}, then shared as two L^{0,2,1}
    pins = sub_sum_witness([0, 2, 1], [0, 4, 2], [0, 2, 1])
    assert pins["subSum1.e12.Y0>0.1"] == 6
    _, r = solve_pinned("subSum1", MIXED, pins)
    assert isinstance(r, Optimal)


def test_sub_sum_demoted_witness_feasible():
    # otherNums : L^{-2,8} shared as two L^{-1,4}; needs the relaxed domain
    pins = sub_sum_witness([-1, 4, 0], [-2, 8, 0], [-1, 4, 0])
    _, r = solve_pinned("subSum1", MIXED_DEMOTED, pins)
    assert isinstance(r, Optimal)
    _, r = solve_pinned("subSum1", MIXED, pins)
    assert isinstance(r, Infeasible)


def test_sub_sum_demoted_witness_needs_the_constant():
    pins = sub_sum_witness([-1, 4, 0], [-2, 8, 0], [-1, 4, 0], qin=0)
    _, r = solve_pinned("subSum1", MIXED_DEMOTED, pins)
    assert isinstance(r, Infeasible)


# ---------------------------------------------------------------- structure


def test_site_map_matches_generated_names():
    system = generate(program("subsetSum"), STIRLING1)
    for site, node in site_map(program("subsetSum")["subsetSum"]):
        if isinstance(node, (App, Tick)):
            assert f"{site}.q" in system.lp.variables


def test_every_constraint_has_an_origin():
    system = generate(program("subSum1"), MIXED_DEMOTED)
    assert all(c.origin for c in system.lp.constraints)


def test_demotion_guards_emitted():
    system = generate(program("subSum1"), MIXED_DEMOTED)
    assert any(c.origin == "subSum1.arg: domain p01 + p10 >= 0" for c in system.lp.constraints)
    assert "subSum1.arg.0" in system.lp.free
    assert not generate(program("subSum1"), MIXED).lp.free


def test_objectives_callees_first():
    system = generate(program("subSum1"), MIXED)
    assert len(system.objectives) == 3
    assert "remove.qin" in system.objectives[0].terms
    assert "subSum1.qin" in system.objectives[1].terms


def test_families_inferred_for_remove():
    system = generate(program("subSum1"), MIXED)
    assert [f.label() for f in system.families["remove"]] == ["0>0"]
    assert system.families["subSum1"] == []


def test_unknown_entry():
    with pytest.raises(KeyError):
        generate(program("subsetSum"), STIRLING1, entry="nope")


def test_remove_signature_is_minimal():
    a = analyze(program("subSum1"), MIXED)
    sig = a.signature("remove")
    assert sig.arg.right.ann.coeffs == (1, 0, 0)
    assert (sig.qin, sig.qout) == (0, 0)
