"""Differential checking of inferred bounds against measured high-water marks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .ast import BoolV, IntV, ListV, PairV, Program, SimpleType, TBase, TList, TPair, UnitV, Value
from .potential import value_potential
from .report import FunctionReport
from .semantics import DEFAULT_FUEL, EvalError, FuelExhausted, evaluate, run_deep

ValueRange = Union[int, tuple[int, int]]


def _ints(values: ValueRange) -> list[int]:
    lo, hi = (-values, values) if isinstance(values, int) else values
    return list(range(lo, hi + 1))


def _base_values(t: TBase, values: ValueRange) -> list[Value]:
    if t.name == "int":
        return [IntV(i) for i in _ints(values)]
    if t.name == "bool":
        return [BoolV(False), BoolV(True)]
    return [UnitV()]


def enumerate_inputs(t: SimpleType, size_bound: int, values: ValueRange) -> Iterator[Value]:
    """Every value of type `t` whose lists have length ≤ size_bound, shortest lists first."""
    if isinstance(t, TBase):
        yield from _base_values(t, values)
    elif isinstance(t, TPair):
        rights = list(enumerate_inputs(t.right, size_bound, values))
        for left in enumerate_inputs(t.left, size_bound, values):
            for right in rights:
                yield PairV(left, right)
    else:
        elems = list(enumerate_inputs(t.elem, size_bound, values))
        for n in range(size_bound + 1):
            for items in itertools.product(elems, repeat=n):
                yield ListV(items)


def count_inputs(t: SimpleType, size_bound: int, values: ValueRange) -> int:
    if isinstance(t, TBase):
        return len(_base_values(t, values))
    if isinstance(t, TPair):
        return count_inputs(t.left, size_bound, values) * count_inputs(t.right, size_bound, values)
    c = count_inputs(t.elem, size_bound, values)
    return sum(c**k for k in range(size_bound + 1))


def max_length(v: Value) -> int:
    if isinstance(v, ListV):
        return max([len(v.items)] + [max_length(x) for x in v.items])
    if isinstance(v, PairV):
        return max(max_length(v.left), max_length(v.right))
    return 0


def random_value(t: SimpleType, size_bound: int, values: ValueRange, rng: random.Random, exact: bool = False) -> Value:
    """Random value; with `exact` every top-level list has length exactly size_bound."""
    if isinstance(t, TBase):
        return rng.choice(_base_values(t, values))
    if isinstance(t, TPair):
        return PairV(
            random_value(t.left, size_bound, values, rng, exact),
            random_value(t.right, size_bound, values, rng, exact),
        )
    n = size_bound if exact else rng.randint(0, size_bound)
    inner = min(size_bound, 3)
    return ListV(tuple(random_value(t.elem, inner, values, rng) for _ in range(n)))


def inputs_by_length(
    t: SimpleType, size_bound: int, values: ValueRange, per_length: int = 64, seed: int = 0
) -> Iterator[Value]:
    """For each length n ≤ size_bound: all inputs of that length if there are at most
    `per_length` of them, otherwise `per_length` seeded random ones."""
    for n in range(size_bound + 1):
        below = count_inputs(t, n - 1, values) if n else 0
        total = count_inputs(t, n, values) - below
        if total <= per_length:
            yield from (v for v in enumerate_inputs(t, n, values) if max_length(v) == n)
        else:
            rng = random.Random(f"{seed}:{n}")
            for _ in range(per_length):
                yield random_value(t, n, values, rng, exact=True)
        if total == 0 or not _has_lists(t):
            return


def _has_lists(t: SimpleType) -> bool:
    if isinstance(t, TList):
        return True
    if isinstance(t, TPair):
        return _has_lists(t.left) or _has_lists(t.right)
    return False


@dataclass
class InputCheck:
    input: Value
    q: Optional[Fraction]
    q_prime: Optional[Fraction]
    bound: Fraction
    net_bound: Optional[Fraction]
    exhausted: bool = False

    @property
    def slack(self) -> Optional[Fraction]:
        return None if self.q is None else self.bound - self.q

    @property
    def violation(self) -> bool:
        if self.q is None:
            return False
        return self.q > self.bound or self.q - self.q_prime > self.net_bound


@dataclass
class BoundCheckReport:
    function: str
    checks: list[InputCheck] = field(default_factory=list)

    @property
    def measured(self) -> list[InputCheck]:
        return [c for c in self.checks if not c.exhausted]

    @property
    def violations(self) -> list[InputCheck]:
        return [c for c in self.checks if c.violation]

    @property
    def exhausted(self) -> list[InputCheck]:
        return [c for c in self.checks if c.exhausted]

    @property
    def max_slack(self) -> Optional[Fraction]:
        return max((c.slack for c in self.measured), default=None)

    @property
    def min_slack(self) -> Optional[Fraction]:
        return min((c.slack for c in self.measured), default=None)

    @property
    def tight(self) -> list[InputCheck]:
        return [c for c in self.measured if c.slack == 0]

    def summary(self) -> str:
        return (
            f"{self.function}: {len(self.checks)} inputs, {len(self.violations)} violations, "
            f"{len(self.exhausted)} out of fuel, slack in [{self.min_slack}, {self.max_slack}], "
            f"{len(self.tight)} tight"
        )


def check_bound(
    p: Program, fn: FunctionReport, inputs: Iterable[Value], fuel: int = DEFAULT_FUEL
) -> BoundCheckReport:
    """Compare both sides of the soundness statement on every input with exact arithmetic."""

    def run() -> BoundCheckReport:
        out = BoundCheckReport(fn.function)
        for v in inputs:
            bound = value_potential(v, fn.arg_type) + fn.q
            try:
                r = evaluate(p, fn.function, v, fuel, deep=False)
            except FuelExhausted:
                out.checks.append(InputCheck(v, None, None, bound, None, exhausted=True))
                continue
            except EvalError as exc:
                raise EvalError(f"evaluating {fn.function} on {v}: {exc}") from None
            net = bound - value_potential(r.value, fn.result_type) - fn.q_prime
            out.checks.append(InputCheck(v, r.q, r.q_prime, bound, net))
        return out

    return run_deep(run)


@dataclass(frozen=True)
class HarnessConfig:
    max_size: int = 8
    values: ValueRange = 3
    per_length: int = 64
    seed: int = 0
    fuel: int = DEFAULT_FUEL

    def inputs(self, t: SimpleType) -> Iterator[Value]:
        return inputs_by_length(t, self.max_size, self.values, self.per_length, self.seed)


def run_harness(p: Program, fn: FunctionReport, cfg: HarnessConfig = HarnessConfig()) -> BoundCheckReport:
    return check_bound(p, fn, cfg.inputs(p[fn.function].param_type), cfg.fuel)
