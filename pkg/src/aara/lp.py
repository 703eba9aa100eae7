"""Exact rational linear programming: two-phase primal simplex with Bland's rule.

Tableau rows are stored sparsely (column -> Fraction) since constraint systems coming
from type inference touch only a handful of variables per row.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

Number = Union[int, Fraction]

ZERO = Fraction(0)


class LinExpr:
    """Affine expression over named variables with rational coefficients."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: Optional[dict[str, Fraction]] = None, const: Number = 0):
        self.terms = {v: Fraction(c) for v, c in (terms or {}).items() if c}
        self.const = Fraction(const)

    @classmethod
    def var(cls, name: str) -> "LinExpr":
        return cls({name: Fraction(1)})

    @staticmethod
    def lift(x) -> "LinExpr":
        return x if isinstance(x, LinExpr) else LinExpr(const=x)

    def _add(self, other, sign: int) -> "LinExpr":
        other = LinExpr.lift(other)
        terms = dict(self.terms)
        for v, c in other.terms.items():
            s = terms.get(v, ZERO) + sign * c
            if s:
                terms[v] = s
            else:
                terms.pop(v, None)
        out = LinExpr()
        out.terms = terms
        out.const = self.const + sign * other.const
        return out

    def __add__(self, other) -> "LinExpr":
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "LinExpr":
        return self._add(other, -1)

    def __rsub__(self, other) -> "LinExpr":
        return LinExpr.lift(other)._add(self, -1)

    def __neg__(self) -> "LinExpr":
        return self * -1

    def __mul__(self, k) -> "LinExpr":
        if isinstance(k, LinExpr):
            if k.terms and self.terms:
                raise TypeError("product of two non-constant linear expressions")
            k, other = (k.const, self) if not k.terms else (self.const, k)
            return other * k
        k = Fraction(k)
        out = LinExpr()
        if k:
            out.terms = {v: c * k for v, c in self.terms.items()}
        out.const = self.const * k
        return out

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return not self.terms

    def evaluate(self, assignment: dict[str, Fraction]) -> Fraction:
        return self.const + sum((c * assignment.get(v, ZERO) for v, c in self.terms.items()), ZERO)

    def variables(self) -> list[str]:
        return list(self.terms)

    def __eq__(self, other) -> bool:
        other = LinExpr.lift(other) if isinstance(other, (int, Fraction, LinExpr)) else other
        return isinstance(other, LinExpr) and self.terms == other.terms and self.const == other.const

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.const))

    def __repr__(self) -> str:
        return f"LinExpr({format_terms(self.terms, self.const)})"


def _num(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_terms(terms: dict[str, Fraction], const: Fraction = ZERO) -> str:
    parts: list[str] = []
    for v, c in terms.items():
        mag = abs(c)
        body = v if mag == 1 else f"{_num(mag)} {v}"
        parts.append(("-" if c < 0 else "+") + " " + body)
    if const or not parts:
        parts.append(("-" if const < 0 else "+") + " " + _num(abs(const)))
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:] if text.startswith("- ") else text


RELATIONS = (">=", "<=", "=")


@dataclass
class Constraint:
    """sum(coeffs[v] * v) rel rhs"""

    coeffs: dict[str, Fraction]
    rel: str
    rhs: Fraction
    origin: str = ""

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    @classmethod
    def of(cls, lhs, rel: str, rhs=0, origin: str = "") -> "Constraint":
        e = LinExpr.lift(lhs) - LinExpr.lift(rhs)
        return cls(dict(e.terms), rel, -e.const, origin)

    def holds(self, assignment: dict[str, Fraction]) -> bool:
        lhs = sum((c * assignment.get(v, ZERO) for v, c in self.coeffs.items()), ZERO)
        if self.rel == ">=":
            return lhs >= self.rhs
        if self.rel == "<=":
            return lhs <= self.rhs
        return lhs == self.rhs

    def __str__(self) -> str:
        return f"{format_terms(self.coeffs)} {self.rel} {_num(self.rhs)}"


@dataclass
class LinearProgram:
    """Minimize `objective` subject to `constraints`; variables are >= 0 unless listed in `free`."""

    variables: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: LinExpr = field(default_factory=LinExpr)
    free: set[str] = field(default_factory=set)

    def __post_init__(self):
        self._known = set(self.variables)

    def add_var(self, name: str, free: bool = False) -> str:
        if name not in self._known:
            self._known.add(name)
            self.variables.append(name)
        if free:
            self.free.add(name)
        return name

    def add(self, c: Constraint) -> Constraint:
        for v in c.coeffs:
            self.add_var(v)
        self.constraints.append(c)
        return c

    def constrain(self, lhs, rel: str, rhs=0, origin: str = "") -> Constraint:
        return self.add(Constraint.of(lhs, rel, rhs, origin))

    def violations(self, assignment: dict[str, Fraction]) -> list[Constraint]:
        bad = [c for c in self.constraints if not c.holds(assignment)]
        bad += [
            Constraint({v: Fraction(1)}, ">=", ZERO, "nonnegativity")
            for v in self.variables
            if v not in self.free and assignment.get(v, ZERO) < 0
        ]
        return bad


# ---------------------------------------------------------------- outcomes


@dataclass
class SolveStats:
    pivots: int = 0
    seconds: float = 0.0
    rows: int = 0
    columns: int = 0


@dataclass
class Optimal:
    assignment: dict[str, Fraction]
    objective: Fraction
    stats: SolveStats
    objectives: list[Fraction] = field(default_factory=list)
    status = "optimal"


@dataclass
class Infeasible:
    rows: list[int]
    origins: list[str]
    multipliers: dict[int, Fraction]
    stats: SolveStats
    status = "infeasible"


@dataclass
class Unbounded:
    ray: dict[str, Fraction]
    stats: SolveStats
    status = "unbounded"


LpOutcome = Union[Optimal, Infeasible, Unbounded]


# ---------------------------------------------------------------- simplex


class _Tableau:
    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.cols: list[tuple[str, str]] = []  # (kind, name) per column
        self.structural: dict[str, tuple[int, Optional[int]]] = {}
        for v in lp.variables:
            pos = self._col("x", v)
            neg = self._col("x-", v) if v in lp.free else None
            self.structural[v] = (pos, neg)
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        self.origin_row: list[int] = []  # index of the source constraint
        self.first_basic: list[int] = []  # initial basic column per row
        self.artificial: set[int] = set()
        self.trivially_false: Optional[int] = None
        self.dead: set[int] = set()  # columns pinned to zero
        self.pivots = 0
        for i, c in enumerate(lp.constraints):
            row: dict[int, Fraction] = {}
            for v, a in c.coeffs.items():
                pos, neg = self.structural[v]
                row[pos] = row.get(pos, ZERO) + a
                if neg is not None:
                    row[neg] = row.get(neg, ZERO) - a
            row = {j: a for j, a in row.items() if a}
            b, rel = c.rhs, c.rel
            if b < 0:
                row = {j: -a for j, a in row.items()}
                b = -b
                rel = {">=": "<=", "<=": ">=", "=": "="}[rel]
            if not row:
                if b != 0 and rel != "<=":
                    self.trivially_false = i
                    return
                continue
            basic = None
            if rel == "<=":
                basic = self._col("s", f"c{i}")
                row[basic] = Fraction(1)
            elif rel == ">=":
                row[self._col("s", f"c{i}")] = Fraction(-1)
            if basic is None:
                basic = self._col("a", f"c{i}")
                self.artificial.add(basic)
                row[basic] = Fraction(1)
            self.rows.append(row)
            self.rhs.append(b)
            self.basis.append(basic)
            self.first_basic.append(basic)
            self.origin_row.append(i)

    def _col(self, kind: str, name: str) -> int:
        self.cols.append((kind, name))
        return len(self.cols) - 1

    def reduced_costs(self, cost: dict[int, Fraction]) -> dict[int, Fraction]:
        d = {j: c for j, c in cost.items() if c}
        for i, bj in enumerate(self.basis):
            cb = cost.get(bj, ZERO)
            if cb:
                for j, a in self.rows[i].items():
                    v = d.get(j, ZERO) - cb * a
                    if v:
                        d[j] = v
                    else:
                        d.pop(j, None)
        return d

    def pivot(self, r: int, c: int, d: dict[int, Fraction]) -> None:
        self.pivots += 1
        pr = self.rows[r]
        piv = pr[c]
        if piv != 1:
            inv = 1 / piv
            pr = {j: a * inv for j, a in pr.items()}
            self.rows[r] = pr
            self.rhs[r] *= inv
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(c)
            if f is None:
                continue
            for j, a in pr.items():
                v = row.get(j, ZERO) - f * a
                if v:
                    row[j] = v
                else:
                    del row[j]
            if br:
                self.rhs[i] -= f * br
        f = d.get(c)
        if f is not None:
            for j, a in pr.items():
                v = d.get(j, ZERO) - f * a
                if v:
                    d[j] = v
                else:
                    del d[j]
        self.basis[r] = c

    def optimize(self, d: dict[int, Fraction]) -> Optional[int]:
        """Run Bland pivots until optimal; returns an unbounded column or None."""
        while True:
            entering = min((j for j, v in d.items() if v < 0 and j not in self.dead), default=None)
            if entering is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return entering
            self.pivot(best[1], entering, d)

    def value_of(self, v: str, x: dict[int, Fraction]) -> Fraction:
        pos, neg = self.structural[v]
        return x.get(pos, ZERO) - (x.get(neg, ZERO) if neg is not None else ZERO)

    def primal(self) -> dict[int, Fraction]:
        return {bj: self.rhs[i] for i, bj in enumerate(self.basis) if self.rhs[i]}

    def cost_vector(self, obj: LinExpr) -> dict[int, Fraction]:
        cost: dict[int, Fraction] = {}
        for v, c in obj.terms.items():
            if v not in self.structural:
                continue
            pos, neg = self.structural[v]
            cost[pos] = c
            if neg is not None:
                cost[neg] = -c
        return cost


def _phase_one(t: _Tableau) -> Optional[Infeasible]:
    if not t.artificial:
        return None
    cost = {j: Fraction(1) for j in t.artificial}
    d = t.reduced_costs(cost)
    t.optimize(d)
    if any(t.rhs[i] for i, bj in enumerate(t.basis) if bj in t.artificial):
        # Farkas multipliers from the phase-one duals
        y: dict[int, Fraction] = {}
        for i, j0 in enumerate(t.first_basic):
            val = cost.get(j0, ZERO) - d.get(j0, ZERO)
            if val:
                y[t.origin_row[i]] = val
        rows = sorted(y)
        return Infeasible(rows, [t.lp.constraints[i].origin for i in rows], y, SolveStats(t.pivots))
    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(t.rows)):
        if t.basis[i] in t.artificial:
            j = min((j for j, a in t.rows[i].items() if j not in t.artificial), default=None)
            if j is None:
                continue
            t.pivot(i, j, {})
        keep.append(i)
    t.rows = [{j: a for j, a in t.rows[i].items() if j not in t.artificial} for i in keep]
    t.rhs = [t.rhs[i] for i in keep]
    t.basis = [t.basis[i] for i in keep]
    t.dead |= t.artificial
    return None


def _finish(t: _Tableau, objective: LinExpr, d: dict[int, Fraction]) -> tuple[dict[str, Fraction], Fraction]:
    assert all(v >= 0 for j, v in d.items() if j not in t.dead), "simplex stopped with a negative reduced cost"
    x = t.primal()
    assignment = {v: t.value_of(v, x) for v in t.lp.variables}
    return assignment, objective.evaluate(assignment)


def lexicographic_solve(lp: LinearProgram, objectives: Iterable[LinExpr]) -> LpOutcome:
    """Minimize each objective in turn, keeping earlier objectives at their optimum.

    After each stage, columns with positive reduced cost are pinned to zero, which restricts
    the search to the optimal face and lets the next stage continue from the same basis.
    """
    start = time.perf_counter()
    t = _Tableau(lp)

    def stats() -> SolveStats:
        return SolveStats(t.pivots, time.perf_counter() - start, len(t.rows), len(t.cols))

    if t.trivially_false is not None:
        i = t.trivially_false
        return Infeasible([i], [lp.constraints[i].origin], {i: Fraction(1)}, stats())
    bad = _phase_one(t)
    if bad is not None:
        bad.stats = stats()
        return bad
    objectives = list(objectives) or [LinExpr()]
    values: list[Fraction] = []
    assignment: dict[str, Fraction] = {}
    for obj in objectives:
        d = t.reduced_costs(t.cost_vector(obj))
        col = t.optimize(d)
        if col is not None:
            return Unbounded(_ray(t, col), stats())
        assignment, value = _finish(t, obj, d)
        values.append(value)
        t.dead |= {j for j, v in d.items() if v > 0}
    bad_rows = lp.violations(assignment)
    if bad_rows:
        raise AssertionError(f"simplex produced an infeasible point: {bad_rows[0]}")
    return Optimal(assignment, values[0], stats(), values)


def solve(lp: LinearProgram) -> LpOutcome:
    return lexicographic_solve(lp, [lp.objective])


def _ray(t: _Tableau, col: int) -> dict[str, Fraction]:
    dx = {col: Fraction(1)}
    for i, bj in enumerate(t.basis):
        a = t.rows[i].get(col)
        if a:
            dx[bj] = -a
    return {v: t.value_of(v, dx) for v in t.lp.variables if t.value_of(v, dx)}


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(
    r"\s*(?:(?P<comment>//[^\n]*|/\*.*?\*/)|(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_.#$\[\]]*)"
    r"|(?P<op>>=|<=|=|:|;|,|\+|-))",
    re.S,
)


def emit(lp: LinearProgram) -> str:
    lines = [f"min: {format_terms(lp.objective.terms, lp.objective.const)};", ""]
    for i, c in enumerate(lp.constraints, 1):
        note = f" // {c.origin}" if c.origin else ""
        lines.append(f"c{i}: {c};{note}")
    unused = [v for v in lp.variables if not any(v in c.coeffs for c in lp.constraints) and v not in lp.objective.terms]
    if unused:
        lines += ["", "declare " + ", ".join(unused) + ";"]
    free = [v for v in lp.variables if v in lp.free]
    if free:
        lines += ["", "free " + ", ".join(free) + ";"]
    return "\n".join(lines) + "\n"


class LpSyntaxError(ValueError):
    pass


def parse(text: str) -> LinearProgram:
    """Parse the text emitted by `emit` (an lp_solve-like subset)."""
    tokens: list[tuple[str, str]] = []
    comments: dict[int, str] = {}
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise LpSyntaxError(f"unexpected input at {text[pos:pos + 20]!r}")
            break
        pos = m.end()
        kind = m.lastgroup
        if kind == "comment":
            body = m.group(kind)
            if body.startswith("//"):
                comments[len(tokens)] = body[2:].strip()
            continue
        tokens.append((kind, m.group(kind)))
    lp = LinearProgram()
    i = 0

    def peek(k: int = 0) -> tuple[str, str]:
        return tokens[i + k] if i + k < len(tokens) else ("eof", "")

    def take(value: Optional[str] = None) -> str:
        nonlocal i
        kind, v = peek()
        if kind == "eof" or (value is not None and v != value):
            raise LpSyntaxError(f"expected {value or 'token'}, found {v or 'end of input'}")
        i += 1
        return v

    def expr() -> LinExpr:
        out = LinExpr()
        sign = 1
        first = True
        while True:
            kind, v = peek()
            if v in ("+", "-"):
                take()
                sign = -sign if v == "-" else sign
                continue
            if kind == "num":
                coef = Fraction(take())
                if peek()[0] == "id" and peek(1)[1] != ":":
                    out = out + LinExpr.var(take()) * (sign * coef)
                else:
                    out = out + sign * coef
            elif kind == "id" and v not in ("free", "declare"):
                out = out + LinExpr.var(take()) * sign
            else:
                if first:
                    return out
                raise LpSyntaxError(f"expected a term, found {v or 'end of input'}")
            first = False
            sign = 1
            if peek()[1] not in ("+", "-"):
                return out

    sense = take()
    if sense not in ("min", "max"):
        raise LpSyntaxError("program must start with min: or max:")
    take(":")
    obj = expr()
    take(";")
    for v in obj.terms:
        lp.add_var(v)
    lp.objective = obj if sense == "min" else -obj
    while peek()[0] != "eof":
        kind, v = peek()
        if v in ("free", "declare"):
            take()
            names = [take()]
            while peek()[1] == ",":
                take(",")
                names.append(take())
            take(";")
            for n in names:
                lp.add_var(n, free=(v == "free"))
            continue
        if kind == "id" and peek(1)[1] == ":":
            take()
            take(":")
        lhs = expr()
        rel = take()
        if rel not in RELATIONS:
            raise LpSyntaxError(f"expected a relation, found {rel}")
        rhs = expr()
        take(";")
        lp.add(Constraint.of(lhs, rel, rhs, comments.get(i, "")))
    return lp
