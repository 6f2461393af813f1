"""Comparison constant A for the walks Q and P, with the spectral certificate where the
group is small enough for a dense eigensolve.

    python3 scripts/comparison_table.py --n 2 3 4 --primes 3 5 7
"""

import argparse

from unitri.comparison import comparison_constant, spectral_comparison_check
from unitri.group import group_order
from unitri.spectral import DENSE_BUDGET


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    args = ap.parse_args()

    print("n,p,A,A_float,A/(p n^2),max_word,argmax,spectral_ok,min_slack")
    for n in args.n:
        for p in args.primes:
            rep = comparison_constant(n, p)
            ok = slack = ""
            if group_order(n, p) <= DENSE_BUDGET:
                chk = spectral_comparison_check(n, p, rep.A)
                ok, slack = chk.ok, f"{chk.min_slack:.2e}"
            A = float(rep.A)
            print(f"{n},{p},{rep.A},{A:.4f},{A / (p * n * n):.3f},{rep.max_word_length},{rep.argmax.token()},{ok},{slack}", flush=True)


if __name__ == "__main__":
    main()
