"""Analyze every bundled example under the basis it needs and print the signatures."""

from __future__ import annotations

import argparse
from pathlib import Path

from aara import corpus
from aara.frontend import load_file
from aara.potential import BasisConfig
from aara.report import report

RUNS = [
    ("snoc", BasisConfig("binomial")),
    ("subsetSum", BasisConfig("stirling")),
    ("ballBins3", BasisConfig("stirling", exp_degree=2)),
    ("subSum1", BasisConfig("mixed")),
    ("subSum1", BasisConfig("mixed", demotion=True)),
    ("log", BasisConfig("binomial")),
    ("loop", BasisConfig("binomial")),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json-dir", type=Path, help="also write one JSON report per run here")
    args = ap.parse_args()
    for name, cfg in RUNS:
        r = report(load_file(corpus.path(name)), cfg)
        stats = r.functions[0].stats if r.functions else None
        size = f"{stats.variables} vars, {stats.constraints} rows, {stats.seconds:.2f}s" if stats else "no solution"
        print(f"== {name} [{cfg.describe()}] {size}")
        print(r.render(), end="")
        if args.json_dir:
            args.json_dir.mkdir(parents=True, exist_ok=True)
            tag = cfg.describe().replace(" ", "_").replace("=", "")
            (args.json_dir / f"{name}.{tag}.json").write_text(r.dumps() + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
