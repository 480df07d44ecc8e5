#!/usr/bin/env python3
"""Train BlockHolE and ComplEx on the family benchmark and classify both path orders.

    python3 scripts/run_order_benchmark.py --families 200 --seeds 0 1 2
"""

import argparse

from blockhole.experiments import ORDER_EPOCHS, ORDER_ETA, ORDER_LAMBDA, format_order_table, run_order_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--families", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--epochs", type=int, default=ORDER_EPOCHS)
    ap.add_argument("--lambda", dest="lam", type=float, default=ORDER_LAMBDA)
    ap.add_argument("--eta", type=float, default=ORDER_ETA)
    args = ap.parse_args()
    for seed in args.seeds:
        results = run_order_experiment(args.families, seed, epochs=args.epochs, lam=args.lam, eta=args.eta)
        print(f"seed {seed}: accuracy (%) on held-out test pairs")
        print(format_order_table(results))
        for r in results:
            print(f"  {r.model} train pos {r.train.positive_accuracy:.1f} / rev {r.train.negative_accuracy:.1f}")
        print()


if __name__ == "__main__":
    main()
