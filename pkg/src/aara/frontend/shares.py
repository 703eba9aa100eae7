"""Automatic share insertion making let-normal expressions linear."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import replace

from ..ast import (
    Binop,
    Cond,
    Cons,
    CoreExpr,
    Let,
    ListMatch,
    Pair,
    PairMatch,
    Program,
    Share,
    count_uses,
    free_vars,
    rename_free,
    subexpressions,
)


def _all_names(e: CoreExpr) -> set[str]:
    names: set[str] = set(free_vars(e))
    for n in subexpressions(e):
        if isinstance(n, Let):
            names.add(n.binder)
        elif isinstance(n, Share):
            names |= {n.y1, n.y2}
        elif isinstance(n, PairMatch):
            names |= {n.b1, n.b2}
        elif isinstance(n, ListMatch):
            names |= {n.bh, n.bt}
    return names


class ShareInserter:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.counters: dict[str, int] = defaultdict(int)

    def fresh(self, x: str) -> str:
        root = x.split("#", 1)[0] or x
        while True:
            self.counters[root] += 1
            name = f"{root}#{self.counters[root]}"
            if name not in self.taken:
                self.taken.add(name)
                return name

    def linearize(self, e: CoreExpr) -> CoreExpr:
        """Insert shares for every binder inside `e`, innermost scopes first."""
        sv, lin = self.share_var, self.linearize
        if isinstance(e, Let):
            return Let(lin(e.e1), e.binder, sv(lin(e.e2), e.binder))
        if isinstance(e, Share):
            return Share(e.x, e.y1, e.y2, sv(sv(lin(e.body), e.y1), e.y2))
        if isinstance(e, Cond):
            return Cond(e.x, lin(e.e_true), lin(e.e_false))
        if isinstance(e, PairMatch):
            return PairMatch(e.x, e.b1, e.b2, sv(sv(lin(e.body), e.b1), e.b2))
        if isinstance(e, ListMatch):
            return ListMatch(e.x, lin(e.e_nil), e.bh, e.bt, sv(sv(lin(e.e_cons), e.bh), e.bt))
        return e

    def share_var(self, e: CoreExpr, x: str) -> CoreExpr:
        """Make free `x` linear in `e`, placing each share at the lowest node dominating its uses."""
        if x == "_" or count_uses(e, x) <= 1:
            return e
        if isinstance(e, Let):
            u1 = count_uses(e.e1, x)
            u2 = 0 if e.binder == x else count_uses(e.e2, x)
            if u1 and u2:
                return self.split(e, x, lambda a, b: Let(rename_free(e.e1, x, a), e.binder, rename_free(e.e2, x, b)))
            if u1:
                return replace(e, e1=self.share_var(e.e1, x))
            return replace(e, e2=self.share_var(e.e2, x))
        if isinstance(e, (Share, PairMatch)):
            if e.x == x:
                return self.split(e, x, lambda a, b: replace(e, x=a, body=rename_free(e.body, x, b)))
            return replace(e, body=self.share_var(e.body, x))
        if isinstance(e, Cond):
            if e.x == x:
                return self.split(
                    e, x, lambda a, b: Cond(a, rename_free(e.e_true, x, b), rename_free(e.e_false, x, b))
                )
            return Cond(e.x, self.share_var(e.e_true, x), self.share_var(e.e_false, x))
        if isinstance(e, ListMatch):
            shadowed = x in (e.bh, e.bt)
            if e.x == x:

                def build(a: str, b: str) -> CoreExpr:
                    cons = e.e_cons if shadowed else rename_free(e.e_cons, x, b)
                    return ListMatch(a, rename_free(e.e_nil, x, b), e.bh, e.bt, cons)

                return self.split(e, x, build)
            cons = e.e_cons if shadowed else self.share_var(e.e_cons, x)
            return ListMatch(e.x, self.share_var(e.e_nil, x), e.bh, e.bt, cons)
        if isinstance(e, Binop):
            return self.split(e, x, lambda a, b: Binop(e.op, a, b))
        if isinstance(e, Pair):
            return self.split(e, x, lambda a, b: Pair(a, b))
        if isinstance(e, Cons):
            return self.split(e, x, lambda a, b: Cons(a, b))
        raise AssertionError(f"{x} used twice in {e!r}")

    def split(self, e: CoreExpr, x: str, build) -> CoreExpr:
        a, b = self.fresh(x), self.fresh(x)
        inner = build(a, b)
        return Share(x, a, b, self.share_var(self.share_var(inner, a), b))


def insert_shares(e: CoreExpr, taken: set[str] | None = None) -> CoreExpr:
    """Return an equivalent expression in which every variable is used at most once per path."""
    ins = ShareInserter(_all_names(e) | (taken or set()))
    out = ins.linearize(e)
    for x in sorted(free_vars(out)):
        out = ins.share_var(out, x)
    return out


def insert_shares_program(p: Program) -> Program:
    return Program({f.name: replace(f, body=insert_shares(f.body, {f.param})) for f in p})
