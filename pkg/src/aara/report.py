"""Turning solved systems into signatures, closed-form bounds and JSON reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .analysis import Analysis, analyze
from .ast import Program
from .lp import Optimal
from .potential import (
    AList,
    AnnotatedType,
    APair,
    BasisConfig,
    ClosedForm,
    closed_form,
    phi,
    type_from_json,
    type_to_json,
)

CHECK_RANGE = range(21)
SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"


@dataclass
class SolverStats:
    variables: int = 0
    constraints: int = 0
    pivots: int = 0
    seconds: float = 0.0


@dataclass
class FunctionReport:
    function: str
    basis: BasisConfig
    arg_type: AnnotatedType
    result_type: AnnotatedType
    q: Fraction
    q_prime: Fraction
    closed_form: str
    stats: SolverStats = field(default_factory=SolverStats)

    def slots(self) -> list[tuple[str, AList]]:
        return bound_slots(self.arg_type)

    def variables(self) -> list[tuple[str, str]]:
        """(bound variable, argument path) for every top-level list argument."""
        slots = self.slots()
        if len(slots) == 1:
            return [("n", f"|{slots[0][0]}|")]
        return [(f"n{_sub(i)}", f"|{path}|") for i, (path, _) in enumerate(slots, 1)]

    def render(self) -> str:
        turnstile = f"--{_q(self.q)}/{_q(self.q_prime)}-->"
        line = f"{self.function} : {self.arg_type} {turnstile} {self.result_type} ; bound: {self.closed_form}"
        used = set(bound_of(self).variables)
        names = [(v, path) for v, path in self.variables() if v in used]
        if names:
            line += " where " + ", ".join(f"{v} = {path}" for v, path in names)
        return line

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "basis": self.basis.to_json(),
            "arg_type": type_to_json(self.arg_type),
            "result_type": type_to_json(self.result_type),
            "q": str(self.q),
            "q_prime": str(self.q_prime),
            "closed_form": self.closed_form,
            "stats": asdict(self.stats),
        }

    @classmethod
    def from_json(cls, d: dict) -> "FunctionReport":
        cfg = BasisConfig.from_json(d["basis"])
        return cls(
            d["function"],
            cfg,
            type_from_json(cfg, d["arg_type"]),
            type_from_json(cfg, d["result_type"]),
            Fraction(d["q"]),
            Fraction(d["q_prime"]),
            d["closed_form"],
            SolverStats(**d["stats"]),
        )


@dataclass
class AnalysisReport:
    entry: Optional[str]
    basis: BasisConfig
    status: str
    functions: list[FunctionReport] = field(default_factory=list)
    hints: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    def get(self, name: str) -> FunctionReport:
        for f in self.functions:
            if f.function == name:
                return f
        raise KeyError(name)

    def render(self) -> str:
        if self.entry is None:
            return ""
        if not self.ok:
            lines = [f"{self.entry}: no bound with the {self.basis.describe()} basis (LP {self.status})"]
            return "\n".join(lines + [f"  {h}" for h in self.hints]) + "\n"
        return "\n".join(f.render() for f in self.functions) + "\n"

    def to_json(self) -> dict:
        return {
            "entry": self.entry,
            "basis": self.basis.to_json(),
            "status": self.status,
            "functions": [f.to_json() for f in self.functions],
            "hints": list(self.hints),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, d: dict) -> "AnalysisReport":
        return cls(
            d["entry"],
            BasisConfig.from_json(d["basis"]),
            d["status"],
            [FunctionReport.from_json(f) for f in d["functions"]],
            list(d["hints"]),
        )

    @classmethod
    def loads(cls, text: str) -> "AnalysisReport":
        return cls.from_json(json.loads(text))


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


def _sub(i: int) -> str:
    return "".join(SUBSCRIPTS[int(d)] for d in str(i))


def bound_slots(t: AnnotatedType, path: str = "arg") -> list[tuple[str, AList]]:
    """Top-level lists of an argument with their paths; right-nested pairs count as one tuple."""
    if isinstance(t, AList):
        return [(path, t)]
    if not isinstance(t, APair):
        return []
    parts: list[AnnotatedType] = []
    while isinstance(t, APair):
        parts.append(t.left)
        t = t.right
    parts.append(t)
    out: list[tuple[str, AList]] = []
    for i, part in enumerate(parts, 1):
        out += bound_slots(part, f"{path}.{i}")
    return out


def bound_of(f: FunctionReport) -> ClosedForm:
    total = ClosedForm(const=f.q)
    for var, (_, slot) in zip((v for v, _ in f.variables()), f.slots()):
        total = total + closed_form(slot.ann, 0, var)
    return total


def _has_inner_potential(t: AnnotatedType, inside: bool = False) -> bool:
    if isinstance(t, AList):
        return (inside and any(t.ann.coeffs)) or _has_inner_potential(t.elem, True)
    if isinstance(t, APair):
        return _has_inner_potential(t.left, inside) or _has_inner_potential(t.right, inside)
    return False


def check_closed_form(f: FunctionReport, cf: ClosedForm) -> None:
    """The rendered bound must agree with q + Σ phi(n, P) on every checked length."""
    names = [v for v, _ in f.variables()]
    for n in CHECK_RANGE:
        expected = f.q + sum((phi(n, slot.ann) for _, slot in f.slots()), Fraction(0))
        got = cf.evaluate({v: n for v in names}) if names else cf.const
        if got != expected:
            raise AssertionError(f"closed form {cf} of {f.function} is {got} at n={n}, expected {expected}")


def build_report(a: Analysis) -> AnalysisReport:
    cfg = a.cfg
    if not isinstance(a.outcome, Optimal):
        return AnalysisReport(a.entry, cfg, a.outcome.status, [], a.hints())
    stats = SolverStats(len(a.system.lp.variables), len(a.system.lp.constraints), a.outcome.stats.pivots, a.seconds)
    functions = []
    for name in a.system.functions:
        sig = a.signature(name)
        f = FunctionReport(name, cfg, sig.arg, sig.res, sig.qin, sig.qout, "", stats)
        cf = bound_of(f)
        check_closed_form(f, cf)
        f.closed_form = str(cf) + (" + element potential" if _has_inner_potential(sig.arg) else "")
        functions.append(f)
    return AnalysisReport(a.entry, cfg, "optimal", functions, [])


def report(p: Program, cfg: BasisConfig, entry: Optional[str] = None) -> AnalysisReport:
    """Analyze and report; an empty program yields an empty report."""
    if not len(p):
        return AnalysisReport(None, cfg, "optimal")
    return build_report(analyze(p, cfg, entry))

