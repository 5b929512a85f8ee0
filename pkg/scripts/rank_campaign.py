"""Singular-value separation behind the rank decision.

For random transported Jordan structures, records the smallest singular value
that should be nonzero and the largest that should vanish (both relative to
sigma_max at the normalised point), and the unresolved/wrong counts for a set
of rank cuts.
"""

import argparse

import numpy as np

from speccartan.charpoly_map import _normalise, jacobian_c, verify_rank_theorem
from speccartan.generators import random_jordan_structure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 7, 11, 123])
    ap.add_argument("--cap", type=float, default=1e3)
    ap.add_argument("--cuts", type=float, nargs="+", default=[1e-7, 1e-10, 1e-12])
    args = ap.parse_args()
    print(f"{'n':>2} {'min nonzero':>12} {'max zero':>10} " + " ".join(f"{'cut ' + format(c, '.0e'):>18}" for c in args.cuts))
    for n in range(2, 7):
        nz, z = [], []
        tally = {c: [0, 0] for c in args.cuts}
        for seed in args.seeds:
            for t in range(args.trials):
                js = random_jordan_structure(n, np.random.default_rng([seed, t]), condition_cap=args.cap)
                s = jacobian_c(_normalise(js.matrix)).singular_values
                s = s / s[0]
                d = js.minpoly_degree
                nz.append(s[d - 1])
                if d < n:
                    z.append(s[d])
                for c in args.cuts:
                    rep = verify_rank_theorem(js.matrix, tol=c)
                    if rep.uncertain:
                        tally[c][0] += 1
                    elif rep.jacobian_rank != d:
                        tally[c][1] += 1
        total = len(args.seeds) * args.trials
        cols = " ".join(f"{f'{u / total:.1%} unres, {w} wrong':>18}" for u, w in tally.values())
        print(f"{n:>2} {min(nz):12.2e} {max(z, default=0.0):10.2e} {cols}")


if __name__ == "__main__":
    main()
