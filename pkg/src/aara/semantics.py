"""Big-step cost semantics with high-water/leftover pairs, and fuel-bounded partial evaluation.

Every rule application consumes one unit of fuel.  When fuel runs out the partial
high-water mark of the explored prefix is reported instead of a value.
"""

from __future__ import annotations

import re
import sys
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TypeVar, Union

from .ast import (
    App,
    Binop,
    BoolV,
    Cond,
    Cons,
    CoreExpr,
    IntV,
    Let,
    ListMatch,
    ListV,
    Lit,
    Nil,
    Pair,
    PairMatch,
    PairV,
    Program,
    Share,
    Tick,
    Unop,
    UnitV,
    Value,
    Var,
    value_has_type,
)

DEFAULT_FUEL = 10**7


@dataclass(frozen=True)
class CostOutcome:
    value: Value
    q: Fraction  # high-water mark
    q_prime: Fraction  # leftover
    steps: int

    @property
    def net(self) -> Fraction:
        return self.q - self.q_prime


@dataclass(frozen=True)
class PartialOutcome:
    watermark: Fraction
    exhausted: bool


class EvalError(Exception):
    pass


class FuelExhausted(Exception):
    def __init__(self, outcome: PartialOutcome):
        self.outcome = outcome
        super().__init__(f"fuel exhausted; partial high-water mark {outcome.watermark}")


class _Partial(Exception):
    def __init__(self, q: Fraction):
        self.q = q


T = TypeVar("T")
Number = Union[int, Fraction]

_STACK_BYTES = 512 * 1024 * 1024


def run_deep(fn: Callable[[], T]) -> T:
    """Run `fn` on a thread with a large stack so deep object-language recursion is safe."""
    box: dict = {}

    def target() -> None:
        try:
            box["value"] = fn()
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 2_000_000))
    old = threading.stack_size(_STACK_BYTES)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old)
    if "error" in box:
        raise box["error"]
    return box["value"]


def _binop(op: str, a: Value, b: Value) -> Value:
    if op == "=":
        return BoolV(a == b)
    if op in ("&&", "||"):
        if not (isinstance(a, BoolV) and isinstance(b, BoolV)):
            raise EvalError(f"{op} expects booleans, got {a} and {b}")
        return BoolV(a.value and b.value if op == "&&" else a.value or b.value)
    if not (isinstance(a, IntV) and isinstance(b, IntV)):
        raise EvalError(f"{op} expects integers, got {a} and {b}")
    if op == "+":
        return IntV(a.value + b.value)
    if op == "-":
        return IntV(a.value - b.value)
    if op == "*":
        return IntV(a.value * b.value)
    if op == "<":
        return BoolV(a.value < b.value)
    raise EvalError(f"unknown operator {op}")


def _unop(op: str, a: Value) -> Value:
    if op == "not" and isinstance(a, BoolV):
        return BoolV(not a.value)
    if op == "neg" and isinstance(a, IntV):
        return IntV(-a.value)
    raise EvalError(f"cannot apply {op} to {a}")


class Interpreter:
    def __init__(self, program: Program, fuel: int):
        self.program = program
        self.fuel = fuel
        self.steps = 0

    # costs stay plain ints until a fractional tick appears; callers convert at the boundary
    def run(self, e: CoreExpr, env: dict[str, Value]) -> tuple[Value, Number, Number]:
        if self.steps >= self.fuel:
            raise _Partial(0)
        self.steps += 1
        if isinstance(e, Let):
            v1, q, qp = self.run(e.e1, env)
            inner = env if e.binder == "_" else {**env, e.binder: v1}
            try:
                v2, p, pp = self.run(e.e2, inner)
            except _Partial as part:
                raise _Partial(q + max(part.q - qp, 0)) from None
            return v2, q + max(p - qp, 0), pp + max(qp - p, 0)
        if isinstance(e, Tick):
            r = e.r.numerator if e.r.denominator == 1 else e.r
            return UnitV(), max(r, 0), max(-r, 0)
        if isinstance(e, Var):
            return self.var(env, e.name), 0, 0
        if isinstance(e, Lit):
            v = UnitV() if e.value is None else BoolV(e.value) if isinstance(e.value, bool) else IntV(e.value)
            return v, 0, 0
        if isinstance(e, Binop):
            return _binop(e.op, self.var(env, e.x1), self.var(env, e.x2)), 0, 0
        if isinstance(e, Unop):
            return _unop(e.op, self.var(env, e.x)), 0, 0
        if isinstance(e, Pair):
            return PairV(self.var(env, e.x1), self.var(env, e.x2)), 0, 0
        if isinstance(e, Nil):
            return ListV(()), 0, 0
        if isinstance(e, Cons):
            tail = self.var(env, e.xt)
            if not isinstance(tail, ListV):
                raise EvalError(f"cons onto non-list {tail}")
            return ListV((self.var(env, e.xh),) + tail.items), 0, 0
        if isinstance(e, App):
            if e.fname not in self.program.functions:
                raise EvalError(f"unknown function {e.fname!r}")
            f = self.program[e.fname]
            return self.run(f.body, {f.param: self.var(env, e.x)})
        if isinstance(e, Share):
            v = self.var(env, e.x)
            return self.run(e.body, {**env, e.y1: v, e.y2: v})
        if isinstance(e, Cond):
            v = self.var(env, e.x)
            if not isinstance(v, BoolV):
                raise EvalError(f"condition {e.x} is not a boolean: {v}")
            return self.run(e.e_true if v.value else e.e_false, env)
        if isinstance(e, PairMatch):
            v = self.var(env, e.x)
            if not isinstance(v, PairV):
                raise EvalError(f"pair match on non-pair {v}")
            return self.run(e.body, {**env, e.b1: v.left, e.b2: v.right})
        if isinstance(e, ListMatch):
            v = self.var(env, e.x)
            if not isinstance(v, ListV):
                raise EvalError(f"list match on non-list {v}")
            if not v.items:
                return self.run(e.e_nil, env)
            return self.run(e.e_cons, {**env, e.bh: v.items[0], e.bt: ListV(v.items[1:])})
        raise EvalError(f"unknown expression {e!r}")

    @staticmethod
    def var(env: dict[str, Value], x: str) -> Value:
        try:
            return env[x]
        except KeyError:
            raise EvalError(f"unbound variable {x!r}") from None


def _start(p: Program, entry: str, arg: Value, fuel: int) -> tuple[Interpreter, CoreExpr, dict]:
    if entry not in p.functions:
        raise EvalError(f"unknown function {entry!r}")
    f = p[entry]
    if f.param_type is not None and not value_has_type(arg, f.param_type):
        raise EvalError(f"argument {arg} does not have type {f.param_type}")
    return Interpreter(p, fuel), f.body, {f.param: arg}


def evaluate(p: Program, entry: str, arg: Value, fuel: int = DEFAULT_FUEL, deep: bool = True) -> CostOutcome:
    """Evaluate `entry` on `arg`; raises FuelExhausted carrying the partial watermark.

    With `deep=False` the caller is responsible for running on a big enough stack.
    """
    interp, body, env = _start(p, entry, arg, fuel)

    def go() -> CostOutcome:
        try:
            v, q, qp = interp.run(body, env)
        except _Partial as part:
            raise FuelExhausted(PartialOutcome(Fraction(part.q), True)) from None
        return CostOutcome(v, Fraction(q), Fraction(qp), interp.steps)

    return run_deep(go) if deep else go()


def watermark(p: Program, entry: str, arg: Value, fuel: int, deep: bool = True) -> PartialOutcome:
    """High-water mark of the evaluation prefix explored within `fuel` rule applications."""
    try:
        out = evaluate(p, entry, arg, fuel, deep)
    except FuelExhausted as exc:
        return exc.outcome
    return PartialOutcome(out.q, False)


# ---------------------------------------------------------------- value literals

_VALUE_TOKEN = re.compile(r"\s*(-?[0-9]+|true|false|\(\)|[()\[\],])")


def parse_value(text: str) -> Value:
    """Parse `[1,2,3]`, `(1,[2])`, `true`, `42`, `()`; tuples nest to the right."""
    tokens: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _VALUE_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad value literal at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def item() -> Value:
        nonlocal i
        if i >= len(tokens):
            raise ValueError("unexpected end of value literal")
        t = tokens[i]
        i += 1
        if t == "()":
            return UnitV()
        if t in ("true", "false"):
            return BoolV(t == "true")
        if t == "[":
            items: list[Value] = []
            if tokens[i] != "]":
                items.append(item())
                while tokens[i] == ",":
                    i += 1
                    items.append(item())
            expect("]")
            return ListV(tuple(items))
        if t == "(":
            parts = [item()]
            while tokens[i] == ",":
                i += 1
                parts.append(item())
            expect(")")
            out = parts[-1]
            for v in reversed(parts[:-1]):
                out = PairV(v, out)
            return out
        try:
            return IntV(int(t))
        except ValueError:
            raise ValueError(f"unexpected {t!r} in value literal") from None

    def expect(tok: str) -> None:
        nonlocal i
        if i >= len(tokens) or tokens[i] != tok:
            raise ValueError(f"expected {tok!r} in value literal")
        i += 1

    try:
        v = item()
    except IndexError:
        raise ValueError("unexpected end of value literal") from None
    if i != len(tokens):
        raise ValueError(f"trailing input in value literal: {tokens[i:]}")
    return v
