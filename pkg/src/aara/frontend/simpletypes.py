"""Monomorphic Hindley-Milner style inference of simple types."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

from ..ast import (
    BOOL,
    INT,
    UNIT,
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
from .syntax import NOSPAN, FrontendError, Span, error


class TVar:
    _ids = itertools.count()

    def __init__(self):
        self.id = next(TVar._ids)
        self.ref: Optional[object] = None

    def __repr__(self) -> str:
        return f"'t{self.id}"


def prune(t):
    while isinstance(t, TVar) and t.ref is not None:
        t = t.ref
    return t


def _occurs(v: TVar, t) -> bool:
    t = prune(t)
    if t is v:
        return True
    if isinstance(t, TList):
        return _occurs(v, t.elem)
    if isinstance(t, TPair):
        return _occurs(v, t.left) or _occurs(v, t.right)
    return False


def _show(t) -> str:
    t = prune(t)
    if isinstance(t, TVar):
        return repr(t)
    if isinstance(t, TList):
        return f"{_show(t.elem)} list"
    if isinstance(t, TPair):
        return f"({_show(t.left)} × {_show(t.right)})"
    return str(t)


def _free_vars(t, under_list: bool = False, inside: bool = False) -> list[TVar]:
    """Unresolved variables of t; with under_list only those below some list constructor."""
    t = prune(t)
    if isinstance(t, TVar):
        return [t] if inside or not under_list else []
    if isinstance(t, TList):
        return _free_vars(t.elem, under_list, True)
    if isinstance(t, TPair):
        return _free_vars(t.left, under_list, inside) + _free_vars(t.right, under_list, inside)
    return []


@dataclass(frozen=True)
class TypeTable:
    """Typed program plus the signature of every function."""

    program: Program
    signatures: dict[str, tuple[SimpleType, SimpleType]]


_BINOP_TYPES = {
    "+": (INT, INT, INT),
    "-": (INT, INT, INT),
    "*": (INT, INT, INT),
    "<": (INT, INT, BOOL),
    "&&": (BOOL, BOOL, BOOL),
    "||": (BOOL, BOOL, BOOL),
}


class Inferencer:
    def __init__(self, program: Program, spans: Optional[dict[str, Span]] = None):
        self.program = program
        self.spans = spans or {}
        self.sigs = {f.name: (TVar(), TVar()) for f in program}
        self.current = ""

    def fail(self, msg: str) -> FrontendError:
        return error(f"in function {self.current!r}: {msg}", self.spans.get(self.current, NOSPAN))

    def unify(self, a, b, what: str) -> None:
        a, b = prune(a), prune(b)
        if a is b:
            return
        if isinstance(a, TVar):
            if _occurs(a, b):
                raise self.fail(f"occurs check failed for {what}: {_show(a)} in {_show(b)}")
            a.ref = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, what)
            return
        if isinstance(a, TBase) and isinstance(b, TBase) and a.name == b.name:
            return
        if isinstance(a, TList) and isinstance(b, TList):
            self.unify(a.elem, b.elem, what)
            return
        if isinstance(a, TPair) and isinstance(b, TPair):
            self.unify(a.left, b.left, what)
            self.unify(a.right, b.right, what)
            return
        raise self.fail(f"type mismatch in {what}: {_show(a)} vs {_show(b)}")

    def lookup(self, env: dict, x: str):
        if x not in env:
            if x in self.sigs:
                raise self.fail(f"function {x!r} used as a value (functions are first-order)")
            raise self.fail(f"unbound variable {x!r}")
        return env[x]

    def infer(self, e: CoreExpr, env: dict) -> tuple[object, CoreExpr]:
        if isinstance(e, Lit):
            if e.value is None:
                return UNIT, e
            return (BOOL if isinstance(e.value, bool) else INT), e
        if isinstance(e, Var):
            return self.lookup(env, e.name), e
        if isinstance(e, Binop):
            t1, t2 = self.lookup(env, e.x1), self.lookup(env, e.x2)
            if e.op == "=":
                self.unify(t1, t2, f"operands of {e.x1} = {e.x2}")
                return BOOL, e
            a, b, r = _BINOP_TYPES[e.op]
            self.unify(t1, a, f"left operand of {e.op}")
            self.unify(t2, b, f"right operand of {e.op}")
            return r, e
        if isinstance(e, Unop):
            t = BOOL if e.op == "not" else INT
            self.unify(self.lookup(env, e.x), t, f"operand of {e.op}")
            return t, e
        if isinstance(e, App):
            if e.fname in env:
                raise self.fail(f"{e.fname!r} is a variable and cannot be applied")
            if e.fname not in self.sigs:
                raise self.fail(f"call to undeclared function {e.fname!r}")
            arg, res = self.sigs[e.fname]
            self.unify(self.lookup(env, e.x), arg, f"argument of {e.fname}")
            return res, e
        if isinstance(e, Tick):
            return UNIT, e
        if isinstance(e, Pair):
            return TPair(self.lookup(env, e.x1), self.lookup(env, e.x2)), e
        if isinstance(e, Nil):
            elem = TVar()
            return TList(elem), Nil(elem)
        if isinstance(e, Cons):
            th = self.lookup(env, e.xh)
            self.unify(self.lookup(env, e.xt), TList(th), f"{e.xh} :: {e.xt}")
            return TList(th), e
        if isinstance(e, Let):
            t1, e1 = self.infer(e.e1, env)
            t2, e2 = self.infer(e.e2, {**env, e.binder: t1})
            return t2, Let(e1, e.binder, e2)
        if isinstance(e, Share):
            t = self.lookup(env, e.x)
            t2, body = self.infer(e.body, {**env, e.y1: t, e.y2: t})
            return t2, replace(e, body=body)
        if isinstance(e, Cond):
            self.unify(self.lookup(env, e.x), BOOL, f"condition {e.x}")
            t1, a = self.infer(e.e_true, env)
            t2, b = self.infer(e.e_false, env)
            self.unify(t1, t2, "branches of if")
            return t1, Cond(e.x, a, b)
        if isinstance(e, PairMatch):
            l, r = TVar(), TVar()
            self.unify(self.lookup(env, e.x), TPair(l, r), f"pair match on {e.x}")
            t, body = self.infer(e.body, {**env, e.b1: l, e.b2: r})
            return t, replace(e, body=body)
        if isinstance(e, ListMatch):
            elem = TVar()
            self.unify(self.lookup(env, e.x), TList(elem), f"list match on {e.x}")
            t1, en = self.infer(e.e_nil, env)
            t2, ec = self.infer(e.e_cons, {**env, e.bh: elem, e.bt: TList(elem)})
            self.unify(t1, t2, "arms of list match")
            return t1, ListMatch(e.x, en, e.bh, e.bt, ec)
        raise TypeError(f"unknown core node {e!r}")

    def ground(self, t, what: str = "") -> SimpleType:
        t = prune(t)
        if isinstance(t, TVar):
            # element types never inspected by the program default to int
            t.ref = INT
            return INT
        if isinstance(t, TList):
            return TList(self.ground(t.elem, what))
        if isinstance(t, TPair):
            return TPair(self.ground(t.left, what), self.ground(t.right, what))
        return t

    def ground_expr(self, e: CoreExpr) -> CoreExpr:
        if isinstance(e, Nil):
            return Nil(self.ground(e.elem, "an empty list"))
        if isinstance(e, Let):
            return Let(self.ground_expr(e.e1), e.binder, self.ground_expr(e.e2))
        if isinstance(e, (Share, PairMatch)):
            return replace(e, body=self.ground_expr(e.body))
        if isinstance(e, Cond):
            return Cond(e.x, self.ground_expr(e.e_true), self.ground_expr(e.e_false))
        if isinstance(e, ListMatch):
            return ListMatch(e.x, self.ground_expr(e.e_nil), e.bh, e.bt, self.ground_expr(e.e_cons))
        return e

    def run(self) -> TypeTable:
        bodies = {}
        for f in self.program:
            self.current = f.name
            arg, res = self.sigs[f.name]
            t, body = self.infer(f.body, {f.param: arg})
            self.unify(t, res, f"result of {f.name}")
            bodies[f.name] = body
        functions, sigs = {}, {}
        for f in self.program:
            self.current = f.name
            arg, res = self.sigs[f.name]
            loose = _free_vars(arg) + _free_vars(res)
            elems = _free_vars(arg, under_list=True) + _free_vars(res, under_list=True)
            if any(all(v is not w for w in elems) for v in loose):
                raise self.fail(f"ambiguous type {_show(arg)} -> {_show(res)}: nothing fixes the type variable")
            a = self.ground(arg, f"parameter {f.param!r}")
            r = self.ground(res, "the result")
            sigs[f.name] = (a, r)
            functions[f.name] = FunDef(f.name, f.param, self.ground_expr(bodies[f.name]), a, r)
        return TypeTable(Program(functions), sigs)


def infer_simple_types(p: Program, spans: Optional[dict[str, Span]] = None) -> TypeTable:
    """Assign ground simple types to every function and empty list, or raise FrontendError."""
    return Inferencer(p, spans).run()
