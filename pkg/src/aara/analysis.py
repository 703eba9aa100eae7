"""End-to-end inference: constraint generation, family validation and lexicographic solving."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ast import Program, called_functions
from .constraints import (
    ConstraintSystem,
    Family,
    FunctionGenerator,
    FunSig,
    GenState,
    build_objective,
    constant_type,
    list_slots,
    signature_skeleton,
)
from .lp import Infeasible, LinExpr, LpOutcome, Optimal, SolveStats, lexicographic_solve, solve
from .potential import AnnotatedType, BasisConfig, domain_generators, map_annotations


def reachable(p: Program, entry: str) -> list[str]:
    """Functions reachable from `entry`, in program order."""
    seen = {entry}
    todo = [entry]
    while todo:
        for g in called_functions(p[todo.pop()].body):
            if g not in seen:
                seen.add(g)
                todo.append(g)
    return [f.name for f in p if f.name in seen]


def components(p: Program, names: list[str]) -> list[list[str]]:
    """Strongly connected components of the call graph, callees before callers."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    out: list[list[str]] = []

    def visit(v: str) -> None:
        index[v] = low[v] = len(index)
        stack.append(v)
        on_stack.add(v)
        for w in sorted(called_functions(p[v].body)):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            out.append(sorted(comp, key=names.index))

    for v in names:
        if v not in index:
            visit(v)
    return out


def zero_signature(p: Program, name: str, cfg: BasisConfig) -> FunSig:
    f = p[name]
    return FunSig(constant_type(f.param_type, cfg), constant_type(f.result_type, cfg), LinExpr(), LinExpr())


def candidate_families(p: Program, name: str) -> list[Family]:
    f = p[name]
    args, results = list_slots(f.param_type), list_slots(f.result_type)
    return [Family(name, i, j) for i, a in enumerate(args) for j, r in enumerate(results) if a == r]


def family_holds(p: Program, fam: Family, cfg: BasisConfig, assumed: dict[str, list[Family]]) -> bool:
    """Check that g → g is cost-free derivable for every generator g of the annotation domain."""
    f = p[fam.fname]
    for g in domain_generators(cfg):
        st = GenState(cfg)
        sig = FunSig(
            constant_type(f.param_type, cfg, {fam.arg_slot: g}),
            constant_type(f.result_type, cfg, {fam.res_slot: g}),
            LinExpr(),
            LinExpr(),
        )

        def policy(name: str):
            return zero_signature(p, name, cfg), assumed.get(name, [])

        FunctionGenerator(st, p, f, policy, cost_free=True).function(sig)
        if st.contradictions or not isinstance(solve(st.lp), Optimal):
            return False
    return True


def infer_families(p: Program, names: list[str], cfg: BasisConfig) -> dict[str, list[Family]]:
    families: dict[str, list[Family]] = {}
    for comp in components(p, names):
        cands = {f: candidate_families(p, f) for f in comp}
        changed = True
        while changed:
            changed = False
            assumed = {**families, **cands}
            for f in comp:
                keep = [fam for fam in cands[f] if family_holds(p, fam, cfg, assumed)]
                if keep != cands[f]:
                    cands[f] = keep
                    changed = True
        families.update(cands)
    return families


def generate(p: Program, cfg: BasisConfig, entry: Optional[str] = None, families: bool = True) -> ConstraintSystem:
    """Build the constraint system for every function reachable from `entry` (default: last)."""
    if not len(p):
        raise ValueError("empty program")
    entry = entry or list(p.functions)[-1]
    if entry not in p.functions:
        raise KeyError(f"unknown entry function {entry!r}")
    names = reachable(p, entry)
    fams = infer_families(p, names, cfg) if families else {f: [] for f in names}
    st = GenState(cfg)
    sigs = {f: signature_skeleton(st, p[f]) for f in names}

    def policy(name: str):
        return sigs[name], fams[name]

    for f in names:
        FunctionGenerator(st, p, p[f], policy).function(sigs[f])
    # callees first: each function keeps the signature that is minimal for itself
    order = [f for comp in components(p, names) for f in comp if f != entry] + [entry]
    objectives = [build_objective(cfg, sigs[f]) for f in order] + [sum(st.slack_terms, LinExpr())]
    st.lp.objective = objectives[-2]
    return ConstraintSystem(cfg, p, entry, names, st.lp, sigs, fams, objectives, st.contradictions)


# ---------------------------------------------------------------- results


def substitute_type(t: AnnotatedType, assignment: dict[str, Fraction]) -> AnnotatedType:
    return map_annotations(t, lambda a: a.map(lambda c: LinExpr.lift(c).evaluate(assignment)))


@dataclass(frozen=True)
class ConcreteSig:
    arg: AnnotatedType
    res: AnnotatedType
    qin: Fraction
    qout: Fraction


@dataclass
class Analysis:
    system: ConstraintSystem
    outcome: LpOutcome
    seconds: float

    @property
    def ok(self) -> bool:
        return isinstance(self.outcome, Optimal)

    @property
    def cfg(self) -> BasisConfig:
        return self.system.cfg

    @property
    def entry(self) -> str:
        return self.system.entry

    def signature(self, name: Optional[str] = None) -> ConcreteSig:
        if not isinstance(self.outcome, Optimal):
            raise ValueError("no solution: the system is not feasible")
        sig = self.system.signatures[name or self.entry]
        a = self.outcome.assignment
        return ConcreteSig(
            substitute_type(sig.arg, a),
            substitute_type(sig.res, a),
            LinExpr.lift(sig.qin).evaluate(a),
            LinExpr.lift(sig.qout).evaluate(a),
        )

    def hints(self, limit: int = 8) -> list[str]:
        """Human-readable reasons for infeasibility: certificate constraints, then a recursion hint."""
        if not isinstance(self.outcome, Infeasible):
            return []
        origins = list(dict.fromkeys(o for o in self.outcome.origins if o))
        out = origins[:limit]
        if len(origins) > limit:
            out.append(f"... and {len(origins) - limit} more constraints in the certificate")
        recursive = []
        for o in origins:
            parts = o.split(": ")
            # origins read "function: node: detail"; a recursive call node starts with its own function
            if len(parts) >= 3 and parts[1].startswith(parts[0] + " "):
                recursive.append(parts[1])
        if recursive:
            out.append(
                f"hint: the recursive call '{recursive[0]}' may need more potential than the shared "
                "signature provides (resource-polymorphic recursion)"
            )
        return out


def analyze(p: Program, cfg: BasisConfig, entry: Optional[str] = None) -> Analysis:
    start = time.perf_counter()
    system = generate(p, cfg, entry)
    if system.contradictions:
        outcome: LpOutcome = Infeasible([], system.contradictions, {}, SolveStats())
    else:
        outcome = lexicographic_solve(system.lp, system.objectives)
    return Analysis(system, outcome, time.perf_counter() - start)


__all__ = [
    "Analysis",
    "ConcreteSig",
    "analyze",
    "components",
    "generate",
    "infer_families",
    "reachable",
    "substitute_type",
]

