"""Canonical surface rendering of core expressions; parsing it back yields the same core tree."""

from __future__ import annotations

from ..ast import (
    App,
    Binop,
    Cond,
    Cons,
    CoreExpr,
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

_COMPOUND = (Let, Share, Cond, PairMatch, ListMatch)


def _lit(v) -> str:
    if v is None:
        return "()"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def show(e: CoreExpr, indent: int = 0) -> str:
    pad = "\n" + "  " * (indent + 1)
    if isinstance(e, Lit):
        return _lit(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Binop):
        return f"{e.x1} {e.op} {e.x2}"
    if isinstance(e, Unop):
        return f"not {e.x}" if e.op == "not" else f"-{e.x}"
    if isinstance(e, App):
        return f"{e.fname} {e.x}"
    if isinstance(e, Tick):
        return f"tick {e.r}"
    if isinstance(e, Pair):
        return f"({e.x1}, {e.x2})"
    if isinstance(e, Nil):
        return "[]"
    if isinstance(e, Cons):
        return f"{e.xh} :: {e.xt}"
    if isinstance(e, Let):
        first = show(e.e1, indent + 1)
        if isinstance(e.e1, _COMPOUND):
            first = f"({first})"
        if e.binder == "_":
            return f"{first};" + "\n" + "  " * indent + show(e.e2, indent)
        return f"let {e.binder} = {first} in" + "\n" + "  " * indent + show(e.e2, indent)
    if isinstance(e, Share):
        return f"share {e.x} as {e.y1}, {e.y2} in" + "\n" + "  " * indent + show(e.body, indent)
    if isinstance(e, Cond):
        return f"if {e.x} then ({show(e.e_true, indent + 1)}){pad}else {show(e.e_false, indent + 1)}"
    if isinstance(e, PairMatch):
        return f"match {e.x} with{pad}| ({e.b1}, {e.b2}) -> {show(e.body, indent + 1)}"
    if isinstance(e, ListMatch):
        return (
            f"match {e.x} with{pad}| [] -> ({show(e.e_nil, indent + 1)})"
            f"{pad}| {e.bh} :: {e.bt} -> {show(e.e_cons, indent + 1)}"
        )
    raise TypeError(f"unknown core node {e!r}")


def show_node(e: CoreExpr) -> str:
    """One-line description of a node without its children, for diagnostics."""
    if isinstance(e, Let):
        return f"let {e.binder} = …"
    if isinstance(e, Share):
        return f"share {e.x} as {e.y1}, {e.y2}"
    if isinstance(e, Cond):
        return f"if {e.x} then … else …"
    if isinstance(e, PairMatch):
        return f"match {e.x} with ({e.b1}, {e.b2})"
    if isinstance(e, ListMatch):
        return f"match {e.x} with [] | {e.bh} :: {e.bt}"
    return show(e)


def show_program(p: Program) -> str:
    return "\n\n".join(f"let {f.name} {f.param} =\n  {show(f.body, 1)}" for f in p) + ("\n" if len(p) else "")
