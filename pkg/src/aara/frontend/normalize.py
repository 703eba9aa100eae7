"""Let-normalization: hoist every compound operand into a fresh let, left to right."""

from __future__ import annotations

import itertools
from typing import Callable

from ..ast import (
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
    Tick,
    Unop,
    Var,
)
from .syntax import (
    PCons,
    PLit,
    PNil,
    PTuple,
    PVar,
    SApp,
    SBinop,
    SCons,
    SExpr,
    SIf,
    SLet,
    SList,
    SLit,
    SMatch,
    SShare,
    SSeq,
    STick,
    STuple,
    SUnop,
    SurfaceProgram,
    SVar,
    error,
)

Cont = Callable[[str], CoreExpr]


class Normalizer:
    def __init__(self, prefix: str = "$"):
        self.prefix = prefix
        self.counter = itertools.count(1)

    def fresh(self) -> str:
        return f"{self.prefix}{next(self.counter)}"

    # -- entry points

    def expr(self, e: SExpr) -> CoreExpr:
        if isinstance(e, SVar):
            return Var(e.name)
        if isinstance(e, SLit):
            return Lit(e.value)
        if isinstance(e, STick):
            return Tick(e.r)
        if isinstance(e, SSeq):
            return Let(self.expr(e.first), "_", self.expr(e.second))
        if isinstance(e, SLet):
            return Let(self.expr(e.bound), e.name, self.expr(e.body))
        if isinstance(e, SShare):
            return Share(e.name, e.copy1, e.copy2, self.expr(e.body))
        if isinstance(e, SBinop):
            return self.atoms([e.left, e.right], lambda xs: Binop(e.op, xs[0], xs[1]))
        if isinstance(e, SUnop):
            return self.atoms([e.arg], lambda xs: Unop(e.op, xs[0]))
        if isinstance(e, SApp):
            return self.atoms(list(e.args), lambda xs: self.tuple_then(xs, lambda x: App(e.fname, x)))
        if isinstance(e, STuple):
            return self.atoms(list(e.items), lambda xs: self.tuple_core(xs))
        if isinstance(e, SCons):
            return self.atoms([e.head, e.tail], lambda xs: Cons(xs[0], xs[1]))
        if isinstance(e, SList):
            return self.atoms(list(e.items), self.list_core)
        if isinstance(e, SIf):
            return self.atom(e.cond, lambda x: Cond(x, self.expr(e.then), self.expr(e.orelse)))
        if isinstance(e, SMatch):
            return self.atom(e.scrutinee, lambda x: self.match(x, e))
        raise TypeError(f"unknown surface node {e!r}")

    # -- hoisting helpers

    def atom(self, e: SExpr, k: Cont) -> CoreExpr:
        if isinstance(e, SVar):
            return k(e.name)
        x = self.fresh()
        return Let(self.expr(e), x, k(x))

    def atoms(self, es: list[SExpr], k: Callable[[list[str]], CoreExpr]) -> CoreExpr:
        names: list[str] = []

        def go(i: int) -> CoreExpr:
            if i == len(es):
                return k(names)
            return self.atom(es[i], lambda x: (names.append(x), go(i + 1))[1])

        return go(0)

    def tuple_then(self, xs: list[str], k: Cont) -> CoreExpr:
        if len(xs) == 1:
            return k(xs[0])
        x = self.fresh()
        return Let(self.tuple_core(xs), x, k(x))

    def tuple_core(self, xs: list[str]) -> CoreExpr:
        # right-nested: (a, b, c) is (a, (b, c))
        if len(xs) == 2:
            return Pair(xs[0], xs[1])
        return self.tuple_then(xs[1:], lambda rest: Pair(xs[0], rest))

    def list_core(self, xs: list[str]) -> CoreExpr:
        if not xs:
            return Nil()
        t = self.fresh()
        return Let(self.list_core(xs[1:]), t, Cons(xs[0], t))

    # -- pattern matching

    def match(self, x: str, e: SMatch) -> CoreExpr:
        pats = [p for p, _ in e.arms]
        if any(isinstance(p, (PNil, PCons)) for p in pats):
            nil = [b for p, b in e.arms if isinstance(p, PNil)]
            cons = [(p, b) for p, b in e.arms if isinstance(p, PCons)]
            if len(nil) != 1 or len(cons) != 1 or len(e.arms) != 2:
                raise error("list match needs exactly one [] arm and one h :: t arm", e.span)
            (pc, bc), = cons
            return ListMatch(x, self.expr(nil[0]), pc.head, pc.tail, self.expr(bc))
        if isinstance(pats[0], PTuple):
            if len(e.arms) != 1:
                raise error("tuple match takes exactly one arm", e.span)
            return self.tuple_match(x, pats[0].names, self.expr(e.arms[0][1]))
        if all(isinstance(p, PLit) and isinstance(p.value, bool) for p in pats):
            by_value = {p.value: b for p, b in e.arms}
            if set(by_value) != {True, False} or len(e.arms) != 2:
                raise error("boolean match needs one true and one false arm", e.span)
            return Cond(x, self.expr(by_value[True]), self.expr(by_value[False]))
        return self.literal_match(x, list(e.arms), e)

    def tuple_match(self, x: str, names: tuple[str, ...], body: CoreExpr) -> CoreExpr:
        if len(names) == 2:
            return PairMatch(x, names[0], names[1], body)
        rest = self.fresh()
        return PairMatch(x, names[0], rest, self.tuple_match(rest, names[1:], body))

    def literal_match(self, x: str, arms: list, e: SMatch) -> CoreExpr:
        pat, body = arms[0]
        if isinstance(pat, PVar):
            if len(arms) != 1:
                raise error("unreachable arms after a catch-all pattern", e.span)
            if pat.name == "_":
                return self.expr(body)
            return Let(Var(x), pat.name, self.expr(body))
        if not isinstance(pat, PLit) or len(arms) < 2:
            raise error("literal match must end with a catch-all arm", e.span)
        lit, test = self.fresh(), self.fresh()
        rest = self.literal_match(x, arms[1:], e)
        return Let(Lit(pat.value), lit, Let(Binop("=", x, lit), test, Cond(test, self.expr(body), rest)))


def let_normalize(e: SExpr, prefix: str = "$") -> CoreExpr:
    return Normalizer(prefix).expr(e)


def to_core(program: SurfaceProgram) -> Program:
    """Let-normalize every function; `let f a b = e` takes one right-nested pair parameter."""
    functions = {}
    for f in program.functions:
        norm = Normalizer()
        body = norm.expr(f.body)
        if len(f.params) == 1:
            param = f.params[0]
        else:
            param = norm.fresh()
            body = norm.tuple_match(param, f.params, body)
        functions[f.name] = FunDef(f.name, param, body)
    return Program(functions)
