"""A_n and its two-sided bracket along a geometric range of n.

    python scripts/an_decay.py --builtin exp --lambda0 0.5
"""

import argparse

from bernbound.funcmodel import builtin
from bernbound.theorems import an_bracket, an_value, lambda_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--builtin", default="exp")
    ap.add_argument("--lambda0", type=float, default=0.5)
    ap.add_argument("--n-from", type=int, default=25)
    ap.add_argument("--n-to", type=int, default=25_600)
    args = ap.parse_args()
    f = builtin(args.builtin)

    print(f"{'n':>8} {'lower':>12} {'A_n':>12} {'upper':>12} {'lambda':>9} {'sqrt(n) A_n':>12}")
    n = args.n_from
    while n <= args.n_to:
        lo, hi = an_bracket(f, n, args.lambda0)
        a = an_value(f, n)
        lam = lambda_estimate(f, n)
        print(f"{n:8d} {lo:12.6g} {a:12.6g} {hi:12.6g} {lam:9.5f} {a * n**0.5:12.6g}")
        n *= 2


if __name__ == "__main__":
    main()
