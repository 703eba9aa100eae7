"""Surface language front end: parse, let-normalize, insert shares, infer simple types."""

from __future__ import annotations

from pathlib import Path

from ..ast import Program
from .normalize import let_normalize, to_core
from .parser import parse, parse_expr
from .printer import show, show_program
from .shares import insert_shares, insert_shares_program
from .simpletypes import TypeTable, infer_simple_types
from .syntax import Diagnostic, FrontendError

__all__ = [
    "Diagnostic",
    "FrontendError",
    "TypeTable",
    "elaborate",
    "infer_simple_types",
    "insert_shares",
    "let_normalize",
    "load_file",
    "load_program",
    "parse",
    "parse_expr",
    "show",
    "show_program",
    "to_core",
]


def elaborate(source: str, shares: bool = True) -> Program:
    """Parse and elaborate source text into a typed, let-normal (and by default linear) program."""
    surface = parse(source)
    core = to_core(surface)
    if shares:
        core = insert_shares_program(core)
    spans = {f.name: f.span for f in surface.functions}
    return infer_simple_types(core, spans).program


load_program = elaborate


def load_file(path: str | Path, shares: bool = True) -> Program:
    return elaborate(Path(path).read_text(encoding="utf-8"), shares)
