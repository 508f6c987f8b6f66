"""Reproduce the exp, cos and sin examples: thresholds, constants and spot checks.

    python scripts/reproduce_examples.py [--grid 4097]
"""

import argparse
import math

from bernbound.cli import EXAMPLE2_NOTE, EXAMPLE3_NOTE, example_spot_checks
from bernbound.numerics import GridConfig
from bernbound.theorems import example_constants, example_thresholds


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=4097)
    ap.add_argument("--slack", type=float, default=1e-2)
    args = ap.parse_args()
    cfg = GridConfig(grid_points=args.grid)

    print("constants")
    for name, value in example_constants(cfg).items():
        print(f"  {name:28s} {value:.12g}")

    print("\nthreshold indices")
    for t in example_thresholds():
        print(f"  {t.formula_id:28s} {t.n_value:>12d}  {t.note}")

    print("\nspot checks")
    for r in example_spot_checks(cfg, args.slack):
        if r["holds"] is None:
            print(f"  {r['claim_id']:12s} n={r['n']:<6d} not applicable: {r['note']}")
            continue
        ratio = r["left"] / r["right"] if r["right"] else math.inf
        print(f"  {r['claim_id']:12s} n={r['n']:<6d} left/right = {ratio:10.4f}  holds={r['holds']}")

    print()
    print("note:", EXAMPLE2_NOTE)
    print("note:", EXAMPLE3_NOTE)


if __name__ == "__main__":
    main()
