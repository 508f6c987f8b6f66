"""Tabulate ||f - B_n f|| / omega_phi^2(f, 1/sqrt(n)) over the corpus.

The ratio sits between mu0/32 and 3 once n passes the lower-estimate index;
the table shows how far inside that window the corpus actually lies.

    python scripts/sweep_ratio.py --n-to 500 > ratio.csv
"""

import argparse
import csv
import math
import sys

from bernbound.bernstein import approx_error_norm
from bernbound.funcmodel import builtin_corpus
from bernbound.numerics import GridConfig
from bernbound.smoothness import dt_modulus2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-from", type=int, default=2)
    ap.add_argument("--n-to", type=int, default=200)
    ap.add_argument("--ratio", type=float, default=0.0, help="geometric step; 0 means every n")
    ap.add_argument("--grid", type=int, default=4097)
    args = ap.parse_args()
    cfg = GridConfig(grid_points=args.grid)

    if args.ratio > 1.0:
        ns, k = [], float(args.n_from)
        while k <= args.n_to:
            ns.append(int(round(k)))
            k *= args.ratio
        ns = sorted(set(ns))
    else:
        ns = list(range(args.n_from, args.n_to + 1))

    corpus = [f for f in builtin_corpus() if not f.is_affine()]
    out = csv.writer(sys.stdout)
    out.writerow(["n"] + [f.name for f in corpus])
    for n in ns:
        row = [n]
        for f in corpus:
            e = approx_error_norm(f, n, cfg).value
            w = dt_modulus2(f, 1.0 / math.sqrt(n), cfg).value
            row.append(format(e / w, ".10g"))
        out.writerow(row)


if __name__ == "__main__":
    main()
