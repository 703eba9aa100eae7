"""Let-normal core syntax, simple types, runtime values and programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

# ---------------------------------------------------------------- simple types


@dataclass(frozen=True)
class TBase:
    name: str  # int | bool | unit

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TList:
    elem: "SimpleType"

    def __str__(self) -> str:
        inner = f"({self.elem})" if isinstance(self.elem, TPair) else str(self.elem)
        return f"{inner} list"


@dataclass(frozen=True)
class TPair:
    left: "SimpleType"
    right: "SimpleType"

    def __str__(self) -> str:
        left = f"({self.left})" if isinstance(self.left, TPair) else str(self.left)
        return f"{left} × {self.right}"


SimpleType = Union[TBase, TList, TPair]

INT = TBase("int")
BOOL = TBase("bool")
UNIT = TBase("unit")

# ---------------------------------------------------------------- expressions

BINOPS = ("+", "-", "*", "=", "<", "||", "&&")
UNOPS = ("not", "neg")


@dataclass(frozen=True)
class Lit:
    value: Union[int, bool, None]  # None is the unit value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Binop:
    op: str
    x1: str
    x2: str


@dataclass(frozen=True)
class Unop:
    op: str
    x: str


@dataclass(frozen=True)
class App:
    fname: str
    x: str


@dataclass(frozen=True)
class Let:
    e1: "CoreExpr"
    binder: str
    e2: "CoreExpr"


@dataclass(frozen=True)
class Share:
    x: str
    y1: str
    y2: str
    body: "CoreExpr"


@dataclass(frozen=True)
class Tick:
    r: Fraction


@dataclass(frozen=True)
class Pair:
    x1: str
    x2: str


@dataclass(frozen=True)
class Nil:
    # element type, filled in by simple type inference
    elem: Optional[SimpleType] = field(default=None, compare=False)


@dataclass(frozen=True)
class Cons:
    xh: str
    xt: str


@dataclass(frozen=True)
class Cond:
    x: str
    e_true: "CoreExpr"
    e_false: "CoreExpr"


@dataclass(frozen=True)
class PairMatch:
    x: str
    b1: str
    b2: str
    body: "CoreExpr"


@dataclass(frozen=True)
class ListMatch:
    x: str
    e_nil: "CoreExpr"
    bh: str
    bt: str
    e_cons: "CoreExpr"


CoreExpr = Union[
    Lit, Var, Binop, Unop, App, Let, Share, Tick, Pair, Nil, Cons, Cond, PairMatch, ListMatch
]

# ---------------------------------------------------------------- programs


@dataclass(frozen=True)
class FunDef:
    name: str
    param: str
    body: CoreExpr
    param_type: Optional[SimpleType] = None
    result_type: Optional[SimpleType] = None


@dataclass(frozen=True)
class Program:
    functions: dict[str, FunDef]

    def __getitem__(self, name: str) -> FunDef:
        return self.functions[name]

    def __iter__(self) -> Iterator[FunDef]:
        return iter(self.functions.values())

    def __len__(self) -> int:
        return len(self.functions)


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class IntV:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class BoolV:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class UnitV:
    def __str__(self) -> str:
        return "()"


@dataclass(frozen=True)
class PairV:
    left: "Value"
    right: "Value"

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class ListV:
    items: tuple["Value", ...]  # index 0 is the head

    def __str__(self) -> str:
        return "[" + ", ".join(str(v) for v in self.items) + "]"


Value = Union[IntV, BoolV, UnitV, PairV, ListV]


def value_has_type(v: Value, t: SimpleType) -> bool:
    if isinstance(t, TBase):
        return {
            "int": isinstance(v, IntV),
            "bool": isinstance(v, BoolV),
            "unit": isinstance(v, UnitV),
        }[t.name]
    if isinstance(t, TPair):
        return isinstance(v, PairV) and value_has_type(v.left, t.left) and value_has_type(v.right, t.right)
    return isinstance(v, ListV) and all(value_has_type(x, t.elem) for x in v.items)


# ---------------------------------------------------------------- traversal

# Each binding form binds names in exactly one child; operands are variable positions.


def operands(e: CoreExpr) -> tuple[str, ...]:
    """Variable names in operand position of `e` itself (not its children)."""
    if isinstance(e, Var):
        return (e.name,)
    if isinstance(e, (Binop, Pair)):
        return (e.x1, e.x2)
    if isinstance(e, Cons):
        return (e.xh, e.xt)
    if isinstance(e, (Unop, App, Cond, PairMatch, ListMatch)):
        return (e.x,)
    if isinstance(e, Share):
        return (e.x,)
    return ()


def free_vars(e: CoreExpr) -> frozenset[str]:
    if isinstance(e, Let):
        return free_vars(e.e1) | (free_vars(e.e2) - {e.binder})
    if isinstance(e, Share):
        return frozenset({e.x}) | (free_vars(e.body) - {e.y1, e.y2})
    if isinstance(e, Cond):
        return frozenset({e.x}) | free_vars(e.e_true) | free_vars(e.e_false)
    if isinstance(e, PairMatch):
        return frozenset({e.x}) | (free_vars(e.body) - {e.b1, e.b2})
    if isinstance(e, ListMatch):
        return frozenset({e.x}) | free_vars(e.e_nil) | (free_vars(e.e_cons) - {e.bh, e.bt})
    return frozenset(operands(e))


def rename_free(e: CoreExpr, old: str, new: str) -> CoreExpr:
    """Substitute `new` for free occurrences of `old`; `new` must be fresh."""

    def r(x: str) -> str:
        return new if x == old else x

    if isinstance(e, Var):
        return Var(r(e.name))
    if isinstance(e, Binop):
        return Binop(e.op, r(e.x1), r(e.x2))
    if isinstance(e, Unop):
        return Unop(e.op, r(e.x))
    if isinstance(e, App):
        return App(e.fname, r(e.x))
    if isinstance(e, Pair):
        return Pair(r(e.x1), r(e.x2))
    if isinstance(e, Cons):
        return Cons(r(e.xh), r(e.xt))
    if isinstance(e, Let):
        e2 = e.e2 if e.binder == old else rename_free(e.e2, old, new)
        return Let(rename_free(e.e1, old, new), e.binder, e2)
    if isinstance(e, Share):
        body = e.body if old in (e.y1, e.y2) else rename_free(e.body, old, new)
        return Share(r(e.x), e.y1, e.y2, body)
    if isinstance(e, Cond):
        return Cond(r(e.x), rename_free(e.e_true, old, new), rename_free(e.e_false, old, new))
    if isinstance(e, PairMatch):
        body = e.body if old in (e.b1, e.b2) else rename_free(e.body, old, new)
        return PairMatch(r(e.x), e.b1, e.b2, body)
    if isinstance(e, ListMatch):
        e_cons = e.e_cons if old in (e.bh, e.bt) else rename_free(e.e_cons, old, new)
        return ListMatch(r(e.x), rename_free(e.e_nil, old, new), e.bh, e.bt, e_cons)
    return e


def count_uses(e: CoreExpr, x: str) -> int:
    """Uses of free `x` along the worst single execution path (branches count as alternatives)."""
    if isinstance(e, Let):
        n = count_uses(e.e1, x)
        return n if e.binder == x else n + count_uses(e.e2, x)
    if isinstance(e, Share):
        own = int(e.x == x)
        return own if x in (e.y1, e.y2) else own + count_uses(e.body, x)
    if isinstance(e, Cond):
        return int(e.x == x) + max(count_uses(e.e_true, x), count_uses(e.e_false, x))
    if isinstance(e, PairMatch):
        own = int(e.x == x)
        return own if x in (e.b1, e.b2) else own + count_uses(e.body, x)
    if isinstance(e, ListMatch):
        cons = 0 if x in (e.bh, e.bt) else count_uses(e.e_cons, x)
        return int(e.x == x) + max(count_uses(e.e_nil, x), cons)
    return sum(1 for y in operands(e) if y == x)


@dataclass(frozen=True)
class LinearityViolation:
    var: str
    first: str
    second: str

    def __str__(self) -> str:
        return f"variable {self.var!r} used more than once: at {self.first} and at {self.second}"


def check_linear(e: CoreExpr, bound: frozenset[str] = frozenset()) -> Optional[LinearityViolation]:
    """Return None when every variable is used at most once per scope, else the first violation.

    Branches of a conditional or match are alternatives; a variable may appear once in each.
    Free variables of `e` are checked as well as the binders inside it.
    """
    from .frontend.printer import show_node

    def sites(expr: CoreExpr, x: str) -> list[str]:
        # describe every use site of free x, in evaluation order
        out: list[str] = []

        def walk(n: CoreExpr) -> None:
            for y in operands(n):
                if y == x:
                    out.append(show_node(n))
            if isinstance(n, Let):
                walk(n.e1)
                if n.binder != x:
                    walk(n.e2)
            elif isinstance(n, Share):
                if x not in (n.y1, n.y2):
                    walk(n.body)
            elif isinstance(n, Cond):
                walk(n.e_true)
                walk(n.e_false)
            elif isinstance(n, PairMatch):
                if x not in (n.b1, n.b2):
                    walk(n.body)
            elif isinstance(n, ListMatch):
                walk(n.e_nil)
                if x not in (n.bh, n.bt):
                    walk(n.e_cons)

        walk(expr)
        return out

    def check_scope(expr: CoreExpr, names: tuple[str, ...]) -> Optional[LinearityViolation]:
        for x in names:
            if x != "_" and count_uses(expr, x) > 1:
                s = sites(expr, x)
                return LinearityViolation(x, s[0], s[1] if len(s) > 1 else s[0])
        return None

    found = check_scope(e, tuple(sorted(free_vars(e))))
    if found:
        return found
    return _check_binders(e, check_scope)


def _check_binders(e: CoreExpr, check_scope) -> Optional[LinearityViolation]:
    scopes: list[tuple[CoreExpr, tuple[str, ...]]] = []
    children: list[CoreExpr] = []
    if isinstance(e, Let):
        scopes.append((e.e2, (e.binder,)))
        children = [e.e1, e.e2]
    elif isinstance(e, Share):
        scopes.append((e.body, (e.y1, e.y2)))
        children = [e.body]
    elif isinstance(e, Cond):
        children = [e.e_true, e.e_false]
    elif isinstance(e, PairMatch):
        scopes.append((e.body, (e.b1, e.b2)))
        children = [e.body]
    elif isinstance(e, ListMatch):
        scopes.append((e.e_cons, (e.bh, e.bt)))
        children = [e.e_nil, e.e_cons]
    for scope, names in scopes:
        found = check_scope(scope, names)
        if found:
            return found
    for c in children:
        found = _check_binders(c, check_scope)
        if found:
            return found
    return None


def subexpressions(e: CoreExpr) -> Iterator[CoreExpr]:
    yield e
    if isinstance(e, Let):
        yield from subexpressions(e.e1)
        yield from subexpressions(e.e2)
    elif isinstance(e, (Share, PairMatch)):
        yield from subexpressions(e.body)
    elif isinstance(e, Cond):
        yield from subexpressions(e.e_true)
        yield from subexpressions(e.e_false)
    elif isinstance(e, ListMatch):
        yield from subexpressions(e.e_nil)
        yield from subexpressions(e.e_cons)


def called_functions(e: CoreExpr) -> set[str]:
    return {n.fname for n in subexpressions(e) if isinstance(n, App)}
