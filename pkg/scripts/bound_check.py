"""Per-length table of measured cost against the inferred bound for one example.

Rows group inputs by their longest list.
"""

from __future__ import annotations

import argparse
from collections import defaultdict

from aara import corpus
from aara.cli import load
from aara.harness import HarnessConfig, max_length, run_harness
from aara.potential import KINDS, BasisConfig
from aara.report import report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("program", help=f"file or one of {', '.join(corpus.NAMES)}")
    ap.add_argument("--basis", choices=KINDS, required=True)
    ap.add_argument("--poly-degree", type=int, default=1)
    ap.add_argument("--exp-degree", type=int, default=1)
    ap.add_argument("--demotion", action="store_true")
    ap.add_argument("--function", help="function to check (default: the entry)")
    ap.add_argument("--max-size", type=int, default=8)
    ap.add_argument("--values", type=int, default=3)
    ap.add_argument("--per-length", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    p = load(args.program)
    r = report(p, BasisConfig(args.basis, args.poly_degree, args.exp_degree, args.demotion))
    if not r.ok:
        raise SystemExit(r.render())
    f = r.get(args.function or r.entry)
    print(f.render())
    out = run_harness(p, f, HarnessConfig(args.max_size, args.values, args.per_length, args.seed))

    rows = defaultdict(list)
    for c in out.measured:
        rows[max_length(c.input)].append(c)
    print(f"{'n':>3} {'inputs':>7} {'max q':>10} {'bound':>10} {'min slack':>10} {'tight':>6}")
    for n in sorted(rows):
        cs = rows[n]
        worst = max(cs, key=lambda c: c.q)
        print(
            f"{n:>3} {len(cs):>7} {str(worst.q):>10} {str(max(c.bound for c in cs)):>10} "
            f"{str(min(c.slack for c in cs)):>10} {sum(c.slack == 0 for c in cs):>6}"
        )
    print(out.summary())


if __name__ == "__main__":
    main()
