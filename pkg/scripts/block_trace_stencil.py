"""Central differences versus the circular stencil for s^k coefficients.

Reads the s^k Taylor coefficient of theta_k(Psi(A + s D_k)) for a second-order
test map Psi (Psi(A) = A, Psi'(A) = I), whose exact value is (-1)^k. It compares
a step-h central difference of order k, the roots-of-unity stencil kept as the
block-trace check's alternative method, and the central difference with one
Richardson step against h / 10 (the check's default). Truncation error of the
plain central difference is O(h^2).
"""

import argparse

import numpy as np

from speccartan.clustering import _central_coefficient, _stencil_coefficient, cluster_spectrum, dk_matrix, theta
from speccartan.generators import ginibre
from speccartan.selfmap_dynamics import SecondOrderPerturbation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    A = np.diag([0, 0, 0, 2.0]).astype(complex)
    cl = cluster_spectrum(A, trials=0)
    psi = SecondOrderPerturbation(A=A, E=0.1 * ginibre(4, np.random.default_rng(args.seed)), mode="sandwich")
    for k in (1, 2, 3):
        D = dk_matrix(cl, 0, k)

        def g(s):
            return theta(psi(A + s * D), cl, check_polydisc=False).components[0][k - 1]

        exact = (-1) ** k
        for h in args.steps:
            coarse = _central_coefficient(g, k, h)
            fine = _central_coefficient(g, k, h / 10)
            fd = abs(coarse - exact)
            rich = abs((100 * fine - coarse) / 99 - exact)
            st = abs(_stencil_coefficient(g, k, h, 16) - exact)
            print(f"k={k} h={h:.0e}: central {fd:.2e}, stencil {st:.2e}, central+Richardson {rich:.2e}")


if __name__ == "__main__":
    main()
