"""Infer bounds for the subset-sum variants under every basis up to a given degree."""

from __future__ import annotations

import argparse
import time

from aara import corpus
from aara.frontend import load_file
from aara.potential import BasisConfig
from aara.report import report


def configs(max_degree: int):
    for k in range(1, max_degree + 1):
        yield BasisConfig("binomial", poly_degree=k)
    for b in range(1, max_degree + 1):
        yield BasisConfig("stirling", exp_degree=b)
    for k in range(1, max_degree + 1):
        for b in range(1, max_degree + 1):
            yield BasisConfig("mixed", k, b)
            yield BasisConfig("mixed", k, b, demotion=True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--programs", nargs="+", default=["subsetSum", "subSum1"])
    ap.add_argument("--max-degree", type=int, default=2)
    args = ap.parse_args()
    for name in args.programs:
        p = load_file(corpus.path(name))
        print(f"== {name}")
        for cfg in configs(args.max_degree):
            start = time.perf_counter()
            r = report(p, cfg)
            bound = r.get(r.entry).closed_form if r.ok else f"({r.status})"
            print(f"  {cfg.describe():<28} {time.perf_counter() - start:6.2f}s  {bound}")


if __name__ == "__main__":
    main()
