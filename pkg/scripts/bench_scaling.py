#!/usr/bin/env python3
"""Per-score time of BlockHolE and RESCAL as the entity dimension grows.

Writes CSV (model,n,dims,scores,ns_per_score) to stdout for an external plotter.
"""

import argparse
import csv
import sys

from blockhole.timing import BENCH_NS, ratio, scaling_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=list(BENCH_NS))
    ap.add_argument("--b", type=int, nargs="+", default=[2])
    ap.add_argument("--calls", type=int, default=10_000)
    args = ap.parse_args()
    out = csv.writer(sys.stdout)
    out.writerow(["model", "n", "dims", "scores", "ns_per_score"])
    for i, b in enumerate(args.b):
        kinds = ("blockhole", "rescal") if i == 0 else ("blockhole",)
        rows = scaling_table(kinds, args.ns, b=b, calls=args.calls)
        for r in rows:
            out.writerow([r.model, r.n, r.dims, r.scores, f"{r.ns_per_score:.1f}"])
        if 100 in args.ns and 200 in args.ns:
            for k in kinds:
                print(f"# {k} b={b} ratio 200/100 = {ratio(rows, k):.2f}", file=sys.stderr)


if __name__ == "__main__":
    main()
