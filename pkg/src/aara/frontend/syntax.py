"""Surface syntax tree produced by the parser, with source spans."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOSPAN = Span(0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Span

    def __str__(self) -> str:
        return f"{self.span}: {self.severity}: {self.message}"


class FrontendError(Exception):
    """Raised with one or more diagnostics when parsing or typing fails."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


def error(message: str, span: Span) -> FrontendError:
    return FrontendError([Diagnostic("error", message, span)])


# spans are excluded from equality so trees compare structurally


@dataclass(frozen=True)
class SVar:
    name: str
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SLit:
    value: Union[int, bool, None]
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SBinop:
    op: str
    left: "SExpr"
    right: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SUnop:
    op: str
    arg: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SApp:
    fname: str
    args: tuple["SExpr", ...]
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class STuple:
    items: tuple["SExpr", ...]
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SCons:
    head: "SExpr"
    tail: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class STick:
    r: Fraction
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SSeq:
    first: "SExpr"
    second: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SLet:
    name: str
    bound: "SExpr"
    body: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SIf:
    cond: "SExpr"
    then: "SExpr"
    orelse: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SShare:
    name: str
    copy1: str
    copy2: str
    body: "SExpr"
    span: Span = field(default=NOSPAN, compare=False)


# patterns


@dataclass(frozen=True)
class PNil:
    pass


@dataclass(frozen=True)
class PCons:
    head: str
    tail: str


@dataclass(frozen=True)
class PTuple:
    names: tuple[str, ...]


@dataclass(frozen=True)
class PLit:
    value: Union[int, bool]


@dataclass(frozen=True)
class PVar:
    name: str  # "_" for wildcard


Pattern = Union[PNil, PCons, PTuple, PLit, PVar]


@dataclass(frozen=True)
class SMatch:
    scrutinee: "SExpr"
    arms: tuple[tuple[Pattern, "SExpr"], ...]
    span: Span = field(default=NOSPAN, compare=False)


SExpr = Union[SVar, SLit, SBinop, SUnop, SApp, STuple, SList, SCons, STick, SSeq, SLet, SIf, SShare, SMatch]


@dataclass(frozen=True)
class SFun:
    name: str
    params: tuple[str, ...]
    body: SExpr
    span: Span = field(default=NOSPAN, compare=False)


@dataclass(frozen=True)
class SurfaceProgram:
    functions: tuple[SFun, ...]

    def names(self) -> list[str]:
        return [f.name for f in self.functions]

    def get(self, name: str) -> Optional[SFun]:
        return next((f for f in self.functions if f.name == name), None)
