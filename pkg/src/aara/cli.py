"""Command line interface: analyze, eval, check-bound, dump-lp."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .analysis import generate
from .ast import Program
from .frontend import FrontendError, load_file
from .harness import HarnessConfig, run_harness
from .potential import KINDS, BasisConfig
from .report import report
from .semantics import EvalError, FuelExhausted, evaluate, parse_value

EXIT_OK = 0
EXIT_FRONTEND = 2
EXIT_INFEASIBLE = 3
EXIT_VIOLATION = 4


class UsageError(Exception):
    pass


def load(name: str) -> Program:
    """Load a source file, falling back to a bundled example of that name."""
    p = Path(name)
    if not p.exists() and name in corpus.NAMES:
        p = corpus.path(name)
    if not p.exists():
        raise UsageError(f"no such file: {name}")
    return load_file(p)


def basis_from(args: argparse.Namespace) -> BasisConfig:
    try:
        return BasisConfig(args.basis, args.poly_degree, args.exp_degree, args.demotion)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def add_basis(p: argparse.ArgumentParser) -> None:
    p.add_argument("--basis", choices=KINDS, required=True)
    p.add_argument("--poly-degree", type=int, default=1, metavar="K")
    p.add_argument("--exp-degree", type=int, default=1, metavar="B")
    p.add_argument("--demotion", action="store_true")
    p.add_argument("--entry", help="function to analyze (default: the last one)")


def cmd_analyze(args: argparse.Namespace) -> int:
    r = report(load(args.file), basis_from(args), args.entry)
    print(r.dumps() if args.json else r.render(), end="\n" if args.json else "")
    return EXIT_OK if r.ok else EXIT_INFEASIBLE


def cmd_eval(args: argparse.Namespace) -> int:
    prog = load(args.file)
    entry = args.entry or list(prog.functions)[-1]
    try:
        arg = parse_value(args.input)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        out = evaluate(prog, entry, arg, args.fuel)
    except FuelExhausted as exc:
        print(f"fuel exhausted after {args.fuel} steps; high-water mark so far: {exc.outcome.watermark}")
        return EXIT_OK
    print(f"value: {out.value}")
    print(f"q: {out.q}")
    print(f"q': {out.q_prime}")
    print(f"steps: {out.steps}")
    return EXIT_OK


def cmd_check_bound(args: argparse.Namespace) -> int:
    prog = load(args.file)
    r = report(prog, basis_from(args), args.entry)
    if not r.ok:
        print(r.render(), end="")
        return EXIT_INFEASIBLE
    fn = r.get(r.entry)
    print(fn.render())
    cfg = HarnessConfig(args.max_size, args.values, args.per_length, args.seed, args.fuel)
    checked = run_harness(prog, fn, cfg)
    print(checked.summary())
    for c in checked.violations[:10]:
        print(f"  violation on {c.input}: measured q={c.q}, q'={c.q_prime}; bound {c.bound}, net bound {c.net_bound}")
    return EXIT_VIOLATION if checked.violations else EXIT_OK


def cmd_dump_lp(args: argparse.Namespace) -> int:
    system = generate(load(args.file), basis_from(args), args.entry)
    print(system.dump(), end="")
    for c in system.contradictions:
        print(f"// contradiction: {c}")
    return EXIT_OK


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aara", description="Amortized resource analysis with exponential bases.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="infer annotated signatures and bounds")
    p.add_argument("file")
    add_basis(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("eval", help="run the cost interpreter")
    p.add_argument("file")
    p.add_argument("--entry")
    p.add_argument("--input", required=True, help="argument literal, e.g. '([1,2,3], 4)'")
    p.add_argument("--fuel", type=int, default=10**7)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("check-bound", help="compare the inferred bound with measured costs")
    p.add_argument("file")
    add_basis(p)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--values", type=int, default=3, help="integers range over [-V, V]")
    p.add_argument("--per-length", type=int, default=64, help="inputs per list length before sampling")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuel", type=int, default=10**7)
    p.set_defaults(run=cmd_check_bound)

    p = sub.add_parser("dump-lp", help="print the constraint system in LP text format")
    p.add_argument("file")
    add_basis(p)
    p.set_defaults(run=cmd_dump_lp)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.run(args)
    except FrontendError as exc:
        print(exc, file=sys.stderr)
        return EXIT_FRONTEND
    except (UsageError, EvalError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRONTEND


if __name__ == "__main__":
    sys.exit(main())
