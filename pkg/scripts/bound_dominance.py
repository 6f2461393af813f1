"""Worst ratio of the Fourier bound to 4 TV^2 for the walk Q over a grid of (n, p).

    python3 scripts/bound_dominance.py --n 2 3 4 --primes 3 5 7 --t-max 200
"""

import argparse
import math

from unitri.supercharacter import upper_bound_rhs, upper_bound_terms
from unitri.walks import WalkSpec, iter_distributions, tv_distance


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--t-max", type=int, default=200)
    args = ap.parse_args()

    print("n,p,labels,min_ratio,argmin_t,final_rhs,final_tv4sq")
    for n in args.n:
        for p in args.primes:
            spec = WalkSpec("Q", p, n=n)
            terms = upper_bound_terms(n, p, spec.a)
            worst, at = math.inf, None
            rhs = lhs = 0.0
            for t, d in iter_distributions(spec, args.t_max):
                if t == 0:
                    continue
                lhs = 4 * tv_distance(d) ** 2
                rhs = upper_bound_rhs(n, p, spec.a, t, terms)
                if lhs > 0 and rhs / lhs < worst:
                    worst, at = rhs / lhs, t
            print(f"{n},{p},{len(terms)},{worst:.6g},{at},{rhs:.3e},{lhs:.3e}", flush=True)


if __name__ == "__main__":
    main()
