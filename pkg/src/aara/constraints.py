"""Syntax-directed generation of linear constraints from the typing rules.

Annotations inside generated types hold LinExprs (or constant Fractions), so the shift and
delta maps of the potential module apply unchanged.  Turnstile constants are LinExprs too;
fresh variables are introduced only where a rule leaves a choice: leaves and branch joins
(the folded-in Relax step), fresh annotations, and demotion slacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .ast import (
    App,
    Binop,
    Cond,
    Cons,
    CoreExpr,
    FunDef,
    Let,
    ListMatch,
    Lit,
    Nil,
    Pair,
    PairMatch,
    Program,
    Share,
    SimpleType,
    TBase,
    Tick,
    TList,
    TPair,
    Unop,
    Var,
)
from .frontend.printer import show_node
from .lp import Constraint, LinearProgram, LinExpr, emit
from .potential import ABase, AList, Annotation, AnnotatedType, APair, BasisConfig, delta, erase, shift

ZERO = Fraction(0)


@dataclass
class FunSig:
    arg: AnnotatedType
    res: AnnotatedType
    qin: LinExpr
    qout: LinExpr


@dataclass(frozen=True)
class Family:
    """Cost-free signatures moving potential g from one argument list to one result list.

    Valid families let every call site add c·(g → g) on top of the function's signature,
    a restricted form of resource-polymorphic recursion.
    """

    fname: str
    arg_slot: int
    res_slot: int

    def label(self) -> str:
        return f"{self.arg_slot}>{self.res_slot}"


# ---------------------------------------------------------------- annotated type helpers


def list_slots(t: SimpleType) -> list[SimpleType]:
    """List types reachable from `t` through pairs only, left to right."""
    if isinstance(t, TList):
        return [t]
    if isinstance(t, TPair):
        return list_slots(t.left) + list_slots(t.right)
    return []


def constant_type(t: SimpleType, cfg: BasisConfig, slot_anns: Optional[dict[int, Annotation]] = None) -> AnnotatedType:
    """Annotated type with zero annotations, except top-level list slots given in `slot_anns`."""
    slot_anns = slot_anns or {}
    counter = [0]

    def go(t: SimpleType, top: bool) -> AnnotatedType:
        if isinstance(t, TList):
            ann = Annotation.zero(cfg)
            if top:
                ann = slot_anns.get(counter[0], ann)
                counter[0] += 1
            return AList(go(t.elem, False), ann)
        if isinstance(t, TPair):
            return APair(go(t.left, top), go(t.right, top))
        return ABase(t)

    return go(t, True)


def add_types(a: AnnotatedType, b: AnnotatedType) -> AnnotatedType:
    if isinstance(a, AList) and isinstance(b, AList):
        return AList(add_types(a.elem, b.elem), Annotation(a.ann.cfg, tuple(x + y for x, y in zip(a.ann.coeffs, b.ann.coeffs))))
    if isinstance(a, APair) and isinstance(b, APair):
        return APair(add_types(a.left, b.left), add_types(a.right, b.right))
    return a


def count_lists(t: SimpleType) -> int:
    if isinstance(t, TList):
        return 1 + count_lists(t.elem)
    if isinstance(t, TPair):
        return count_lists(t.left) + count_lists(t.right)
    return 0


# ---------------------------------------------------------------- generation

CallPolicy = Callable[[str], tuple[FunSig, list[Family]]]


@dataclass
class GenState:
    """Mutable sinks shared by every generator working on one linear program."""

    cfg: BasisConfig
    lp: LinearProgram = field(default_factory=LinearProgram)
    contradictions: list[str] = field(default_factory=list)
    slack_terms: list[LinExpr] = field(default_factory=list)

    def var(self, name: str, free: bool = False) -> LinExpr:
        if name in self.lp._known:
            raise ValueError(f"duplicate LP variable {name}")
        self.lp.add_var(name, free)
        if not free:
            self.slack_terms.append(LinExpr.var(name))
        return LinExpr.var(name)

    def emit(self, lhs, rel: str, rhs, origin: str) -> None:
        c = Constraint.of(lhs, rel, rhs, origin)
        if c.coeffs:
            self.lp.add(c)
        elif not Constraint({}, rel, c.rhs).holds({}):
            self.contradictions.append(origin)

    def annotation(self, prefix: str) -> Annotation:
        cfg = self.cfg
        coeffs = []
        for i, idx in enumerate(cfg.indices):
            relaxed = cfg.demotion and idx[0] == 0
            coeffs.append(self.var(f"{prefix}.{i}", free=relaxed))
        ann = Annotation(cfg, tuple(coeffs))
        if cfg.demotion:
            for k in range(1, cfg.poly_degree + 1):
                guard = ann[(0, k)] + ann[(1, 0)]
                self.emit(guard, ">=", 0, f"{prefix}: domain p0{k} + p10 >= 0")
                self.slack_terms.append(guard)
        return ann

    def fresh_type(self, t: SimpleType, prefix: str) -> AnnotatedType:
        many = count_lists(t) > 1
        counter = [0]

        def go(t: SimpleType) -> AnnotatedType:
            if isinstance(t, TList):
                counter[0] += 1
                name = f"{prefix}.L{counter[0]}" if many else prefix
                ann = self.annotation(name)
                return AList(go(t.elem), ann)
            if isinstance(t, TPair):
                return APair(go(t.left), go(t.right))
            return ABase(t)

        return go(t)

    def subtype(self, a: AnnotatedType, b: AnnotatedType, site: str, origin: str) -> None:
        """a <: b: pointwise a ≥ b (one demotion slack per list when enabled), covariant in elements."""
        if a is b:
            return
        counter = [0]

        def go(a: AnnotatedType, b: AnnotatedType) -> None:
            if isinstance(a, AList) and isinstance(b, AList):
                counter[0] += 1
                if a.ann is not b.ann:
                    self.annotation_leq(b.ann, a.ann, f"{site}.s{counter[0]}", origin)
                go(a.elem, b.elem)
            elif isinstance(a, APair) and isinstance(b, APair):
                go(a.left, b.left)
                go(a.right, b.right)

        go(a, b)

    def annotation_leq(self, small: Annotation, big: Annotation, slack_name: str, origin: str) -> None:
        cfg = self.cfg
        s = self.var(slack_name) if cfg.demotion else None
        for idx, lo, hi in zip(cfg.indices, small.coeffs, big.coeffs):
            if s is not None and idx == (1, 0):
                hi = hi - s
            elif s is not None and idx[0] == 0:
                hi = hi + s
            self.emit(hi, ">=", lo, f"{origin}: subtype at {idx}")

    def share(self, a: AnnotatedType, b1: AnnotatedType, b2: AnnotatedType, origin: str) -> None:
        if isinstance(a, AList):
            for idx, x, y, z in zip(a.ann.cfg.indices, a.ann.coeffs, b1.ann.coeffs, b2.ann.coeffs):
                self.emit(x, "=", LinExpr.lift(y) + z, f"{origin}: split at {idx}")
            self.share(a.elem, b1.elem, b2.elem, origin)
        elif isinstance(a, APair):
            self.share(a.left, b1.left, b2.left, origin)
            self.share(a.right, b1.right, b2.right, origin)

    def relax(self, q, qp, prefix: str, origin: str) -> tuple[LinExpr, LinExpr]:
        """Fresh (q, q') derivable from a native (p, p') by Relax: q ≥ p and q − p ≥ q' − p'."""
        nq, nqp = self.var(f"{prefix}.q"), self.var(f"{prefix}.qp")
        self.emit(nq, ">=", q, f"{origin}: relax q")
        self.emit(nq - q, ">=", nqp - qp, f"{origin}: relax q'")
        return nq, nqp


class FunctionGenerator:
    """Generates constraints for one function body under a call policy.

    `cost_free` zeroes every tick, which is how candidate families are validated.
    """

    def __init__(self, st: GenState, program: Program, fn: FunDef, policy: CallPolicy, cost_free: bool = False):
        self.st = st
        self.program = program
        self.fn = fn
        self.policy = policy
        self.cost_free = cost_free
        self.node_ids = 0

    def site(self) -> str:
        self.node_ids += 1
        return f"{self.fn.name}.e{self.node_ids}"

    def where(self, e: CoreExpr) -> str:
        return f"{self.fn.name}: {show_node(e)}"

    def function(self, sig: FunSig) -> None:
        st = self.st
        a, q, qp = self.gen(self.fn.body, {self.fn.param: sig.arg})
        origin = f"{self.fn.name}: function body"
        st.subtype(a, sig.res, f"{self.fn.name}.body", origin)
        st.emit(sig.qin, ">=", q, f"{origin}: relax q")
        st.emit(LinExpr.lift(sig.qin) - q, ">=", LinExpr.lift(sig.qout) - qp, f"{origin}: relax q'")

    def leaf(self, site: str, e: CoreExpr, q=ZERO, qp=ZERO) -> tuple[LinExpr, LinExpr]:
        return self.st.relax(q, qp, site, self.where(e))

    def gen(self, e: CoreExpr, env: dict[str, AnnotatedType]) -> tuple[AnnotatedType, LinExpr, LinExpr]:
        st = self.st
        site = self.site()
        if isinstance(e, Let):
            a1, q, p = self.gen(e.e1, env)
            inner = dict(env)
            if e.binder != "_":
                inner[e.binder] = a1
            a2, p2, qp = self.gen(e.e2, inner)
            st.emit(p, "=", p2, f"{self.where(e)}: sequence")
            return a2, q, qp
        if isinstance(e, Var):
            return (env[e.name], *self.leaf(site, e))
        if isinstance(e, (Lit, Binop, Unop)):
            t = _result_base(e)
            return (ABase(t), *self.leaf(site, e))
        if isinstance(e, Tick):
            r = ZERO if self.cost_free else Fraction(e.r)
            return (ABase(TBase("unit")), *self.leaf(site, e, max(r, ZERO), max(-r, ZERO)))
        if isinstance(e, Pair):
            return (APair(env[e.x1], env[e.x2]), *self.leaf(site, e))
        if isinstance(e, Nil):
            t = st.fresh_type(TList(e.elem), f"{site}.nil")
            return (t, *self.leaf(site, e))
        if isinstance(e, Cons):
            head, tail = env[e.xh], env[e.xt]
            t = st.fresh_type(erase(tail), f"{site}.cons")
            origin = self.where(e)
            st.subtype(head, t.elem, f"{site}.hd", origin)
            st.subtype(tail, AList(t.elem, shift(t.ann)), f"{site}.tl", origin)
            return (t, *self.leaf(site, e, delta(t.ann), ZERO))
        if isinstance(e, App):
            return self.app(e, env, site)
        if isinstance(e, Share):
            a = env[e.x]
            a1 = st.fresh_type(erase(a), f"{self.fn.name}.share.{e.y1}")
            a2 = st.fresh_type(erase(a), f"{self.fn.name}.share.{e.y2}")
            st.share(a, a1, a2, self.where(e))
            inner = {k: v for k, v in env.items() if k != e.x}
            inner[e.y1], inner[e.y2] = a1, a2
            return self.gen(e.body, inner)
        if isinstance(e, PairMatch):
            a = env[e.x]
            inner = {k: v for k, v in env.items() if k != e.x}
            inner[e.b1], inner[e.b2] = a.left, a.right
            return self.gen(e.body, inner)
        if isinstance(e, Cond):
            inner = {k: v for k, v in env.items() if k != e.x}
            branches = [self.gen(e.e_true, inner), self.gen(e.e_false, inner)]
            return self.join(site, e, branches)
        if isinstance(e, ListMatch):
            a = env[e.x]
            inner = {k: v for k, v in env.items() if k != e.x}
            nil = self.gen(e.e_nil, inner)
            cons_env = dict(inner)
            cons_env[e.bh] = a.elem
            cons_env[e.bt] = AList(a.elem, shift(a.ann))
            ta, tq, tqp = self.gen(e.e_cons, cons_env)
            # the cons arm starts with δ(P) extra constant potential
            return self.join(site, e, [nil, (ta, tq - delta(a.ann), tqp)])
        raise TypeError(f"unknown core node {e!r}")

    def join(self, site: str, e: CoreExpr, branches) -> tuple[AnnotatedType, LinExpr, LinExpr]:
        st = self.st
        origin = self.where(e)
        t = st.fresh_type(erase(branches[0][0]), f"{site}.join")
        q, qp = st.var(f"{site}.q"), st.var(f"{site}.qp")
        for n, (a, bq, bqp) in enumerate(branches, 1):
            st.subtype(a, t, f"{site}.b{n}", f"{origin}: arm {n}")
            st.emit(q, ">=", bq, f"{origin}: arm {n} relax q")
            st.emit(q - bq, ">=", qp - bqp, f"{origin}: arm {n} relax q'")
        return t, q, qp

    def app(self, e: App, env: dict[str, AnnotatedType], site: str) -> tuple[AnnotatedType, LinExpr, LinExpr]:
        st = self.st
        callee = self.program[e.fname]
        sig, fams = self.policy(e.fname)
        arg, res = sig.arg, sig.res
        for fam in fams:
            y = st.annotation(f"{site}.Y{fam.label()}")
            arg = add_types(arg, constant_type(callee.param_type, st.cfg, {fam.arg_slot: y}))
            res = add_types(res, constant_type(callee.result_type, st.cfg, {fam.res_slot: y}))
        origin = self.where(e)
        st.subtype(env[e.x], arg, f"{site}.arg", f"{origin}: argument")
        if isinstance(res, ABase):
            out = res
        else:
            out = st.fresh_type(callee.result_type, f"{site}.ret")
            st.subtype(res, out, f"{site}.res", f"{origin}: result")
        return (out, *self.leaf(site, e, sig.qin, sig.qout))


def _result_base(e: CoreExpr) -> TBase:
    if isinstance(e, Lit):
        if e.value is None:
            return TBase("unit")
        return TBase("bool") if isinstance(e.value, bool) else TBase("int")
    if isinstance(e, Binop):
        return TBase("int") if e.op in "+-*" else TBase("bool")
    return TBase("bool") if e.op == "not" else TBase("int")


# ---------------------------------------------------------------- systems


@dataclass
class ConstraintSystem:
    cfg: BasisConfig
    program: Program
    entry: str
    functions: list[str]
    lp: LinearProgram
    signatures: dict[str, FunSig]
    families: dict[str, list[Family]]
    objectives: list[LinExpr]
    contradictions: list[str]

    def dump(self) -> str:
        return emit(self.lp)

    @property
    def variables(self) -> list[str]:
        return self.lp.variables

    @property
    def constraints(self) -> list[Constraint]:
        return self.lp.constraints


def signature_skeleton(st: GenState, f: FunDef) -> FunSig:
    return FunSig(
        st.fresh_type(f.param_type, f"{f.name}.arg"),
        st.fresh_type(f.result_type, f"{f.name}.res"),
        st.var(f"{f.name}.qin"),
        st.var(f"{f.name}.qout"),
    )


def build_objective(cfg: BasisConfig, sig: FunSig, weight_base: int = 10**4) -> LinExpr:
    """Rank-weighted input coefficients of the entry signature plus its qIn."""
    obj = LinExpr.lift(sig.qin)
    for ann in _annotations(sig.arg):
        for rank, c in enumerate(ann.coeffs, 1):
            obj = obj + LinExpr.lift(c) * weight_base**rank
    return obj


def _annotations(t: AnnotatedType) -> list[Annotation]:
    if isinstance(t, AList):
        return [t.ann] + _annotations(t.elem)
    if isinstance(t, APair):
        return _annotations(t.left) + _annotations(t.right)
    return []


def site_map(fn: FunDef) -> list[tuple[str, CoreExpr]]:
    """(site prefix, node) pairs in the order the generator numbers them."""
    out: list[tuple[str, CoreExpr]] = []

    def go(e: CoreExpr) -> None:
        out.append((f"{fn.name}.e{len(out) + 1}", e))
        if isinstance(e, Let):
            go(e.e1)
            go(e.e2)
        elif isinstance(e, (Share, PairMatch)):
            go(e.body)
        elif isinstance(e, Cond):
            go(e.e_true)
            go(e.e_false)
        elif isinstance(e, ListMatch):
            go(e.e_nil)
            go(e.e_cons)

    go(fn.body)
    return out
