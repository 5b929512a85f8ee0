"""Coefficient drift of entire curves as a function of |Im zeta|.

The curve conjugates by exp(C zeta); its conditioning grows like
exp(2 |Im zeta| ||C||), so double precision limits the usable strip.
The extended-precision column evaluates the same curve at adaptive precision.
"""

import argparse

import numpy as np

from speccartan.charpoly_map import char_coeffs
from speccartan.generators import ginibre
from speccartan.selfmap_dynamics import make_entire_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--matrices", type=int, default=50)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--caps", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0, 5.0, 10.0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for cap in args.caps:
        worst = worst_ext = 0.0
        for t in range(args.matrices):
            rng = np.random.default_rng([args.seed, t])
            W = ginibre(args.n, rng)
            f = make_entire_curve(W)
            c0 = char_coeffs(W)
            for _ in range(args.points):
                y = rng.uniform(-cap, cap)
                half = np.sqrt(max(100.0 - y * y, 0.0))
                z = complex(rng.uniform(-half, half), y)
                with np.errstate(all="ignore"):
                    worst = max(worst, float(np.nanmax(np.abs(char_coeffs(f(z)) - c0))))
                worst_ext = max(worst_ext, float(np.max(np.abs(f.coefficients(z) - c0))))
        print(f"|Im zeta| <= {cap:5.2f}: max drift double {worst:.2e}, extended {worst_ext:.2e}")


if __name__ == "__main__":
    main()
