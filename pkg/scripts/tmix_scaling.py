"""t_mix(1/4) of the walk P on U_2(Z/p) against p^2, with a one-constant fit.

    python3 scripts/tmix_scaling.py --primes 5 7 11 13 17 19
"""

import argparse
import math

from unitri.walks import WalkSpec, mixing_time


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11, 13, 17, 19, 23])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.25)
    args = ap.parse_args()

    tm = {p: mixing_time(WalkSpec("P", p, n=args.n), args.eps) for p in args.primes}
    # geometric-mean fit of t_mix = C p^2
    C = math.exp(sum(math.log(t / p**2) for p, t in tm.items()) / len(tm))
    print("p,t_mix,t_mix/p^2,ratio_to_fit")
    for p, t in tm.items():
        print(f"{p},{t},{t / p**2:.4f},{t / (C * p * p):.3f}")
    print(f"# C = {C:.4f}")


if __name__ == "__main__":
    main()
