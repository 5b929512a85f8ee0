"""Local decomposition of the coefficient map near a base matrix.

Near ``A`` with distinct eigenvalues ``lambda_1..lambda_m`` (multiplicities
``n_i``), the coefficient map factors as ``c = tau o theta``: ``theta`` collects the
symmetric functions of the eigenvalues inside each disc ``D(lambda_i; r)`` and
``tau`` multiplies the resulting monic factors back together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import comb

from .charpoly_map import as_coeffs, from_monic, roots_of, sym_poly, to_monic, to_plain
from .domains import DomainSpec
from .errors import ClusterError, DomainError, PreconditionError
from .matrix_core import (
    DEFAULT_RESIDUAL_TOL,
    EPS,
    as_matrix,
    cluster_values,
    default_cluster_radius,
    eigenvalues,
    holomorphic_derivative,
    matrix_to_json,
)

SAFETY = 0.9


# --- data types -----------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterData:
    base: np.ndarray
    centers: tuple
    multiplicities: tuple
    r: float
    delta: float
    certification: dict
    domain: DomainSpec = field(default_factory=DomainSpec.whole_plane)
    tol: float = DEFAULT_RESIDUAL_TOL

    @property
    def m(self) -> int:
        return len(self.centers)

    @property
    def n(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def offsets(self) -> list[int]:
        return [0, *np.cumsum(self.multiplicities).tolist()]

    def to_json(self) -> dict:
        return {
            "base": matrix_to_json(self.base),
            "centers": {"re": [c.real for c in self.centers], "im": [c.imag for c in self.centers]},
            "multiplicities": list(self.multiplicities),
            "r": self.r,
            "delta": self.delta,
            "certification": self.certification,
            "domain": self.domain.to_json(),
            "tol": self.tol,
        }


@dataclass(frozen=True)
class ThetaPoint:
    components: tuple  # m coefficient vectors of sizes n_1..n_m

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.components)

    @classmethod
    def from_flat(cls, v, sizes) -> "ThetaPoint":
        v = np.asarray(v, dtype=complex)
        cuts = np.cumsum([0, *sizes])
        return cls(tuple(v[cuts[i]:cuts[i + 1]].copy() for i in range(len(sizes))))


@dataclass(frozen=True)
class LocalBasis:
    blocks: tuple  # per cluster: n_i x n_i matrix whose columns are v^i_1..v^i_{n_i}
    matrix: np.ndarray
    conditions: tuple
    identity_residual: float


# --- clustering and certification --------------------------------------------------------


def _analytic_delta(A: np.ndarray, r_eff: float) -> float:
    """Largest entrywise radius for which the root-continuity bound keeps clusters intact.

    For ``||H||_op <= h`` every principal ``k x k`` minor moves by at most
    ``(a + h)^k - a^k`` (multilinear expansion in columns and Hadamard's
    inequality, ``a = ||A||_op``), so ``|c_k(A+H) - c_k(A)| <= C(n,k)((a+h)^k - a^k)``.
    An entrywise perturbation of size ``delta`` has ``||H||_op <= n delta``.
    """
    n = A.shape[0]
    if r_eff <= 0:
        return 0.0
    a = float(np.linalg.norm(A, 2))
    base = to_plain(sym_poly(eigenvalues(A)))
    k = np.arange(1, n + 1)
    binom = comb(n, k)

    def ok(delta):
        h = n * delta
        dev = binom * ((a + h) ** k - a ** k)
        # worst admissible neighbour: each |coefficient| grown by its deviation
        worst = np.abs(base) + dev
        T = max(1.0, float(np.max(worst ** (1.0 / k))), float(np.max(np.abs(base) ** (1.0 / k))))
        return 4 * n * T * float(np.linalg.norm(dev)) ** (1.0 / n) < r_eff

    hi = r_eff / n
    while not ok(hi) and hi > 1e-300:
        hi /= 16
    if hi <= 1e-300:
        return 0.0
    lo, hi = hi, hi * 16
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-6:
            break
    return lo


def _assign(values, centers, r, tol):
    """Disc index of each value; raises on boundary-ambiguous or uncovered values."""
    idx = []
    for v in values:
        d = np.abs(np.asarray(centers) - v)
        i = int(np.argmin(d))
        if abs(d[i] - r) <= 10 * tol:
            raise ClusterError(f"eigenvalue {complex(v)} lies within {10 * tol:g} of the disc boundary around {centers[i]}")
        if d[i] >= r:
            raise ClusterError(f"eigenvalue {complex(v)} lies outside every disc (nearest centre {centers[i]}, distance {d[i]:.3e})")
        idx.append(i)
    return np.array(idx, dtype=int)


def _counts_ok(values, centers, mults, r, tol) -> bool:
    try:
        idx = _assign(values, centers, r, tol)
    except ClusterError:
        return False
    return all(int(np.sum(idx == i)) == mults[i] for i in range(len(centers)))


def cluster_spectrum(A, omega: DomainSpec | None = None, trials: int = 64, seed: int = 0,
                     tol: float = DEFAULT_RESIDUAL_TOL) -> ClusterData:
    """Cluster the spectrum of ``A`` and certify a polydisc radius ``delta``.

    ``r`` is 0.9 times the largest radius keeping the discs disjoint and inside
    ``omega`` (capped at ``0.9 max(1, ||A||)`` when nothing else bounds it).
    ``delta`` is the smaller of an analytic radius from the root-continuity
    bound and a radius at which ``trials`` random points of the distinguished
    boundary of the polydisc all preserve the cluster counts.
    """
    A = as_matrix(A)
    omega = omega or DomainSpec.whole_plane()
    n = A.shape[0]
    ev = eigenvalues(A, tol)
    groups = cluster_values(ev, default_cluster_radius(A))
    centers = [complex(np.mean(ev[g])) for g in groups]
    mults = [len(g) for g in groups]
    spread = max(float(np.max(np.abs(ev[g] - c))) for g, c in zip(groups, centers))
    sep = math.inf
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            sep = min(sep, abs(centers[i] - centers[j]))
    if sep <= 20 * tol:
        raise ClusterError(f"clusters separated by {sep:.3e}, not resolvable at tolerance {tol:g}")
    for c in centers:
        if not omega.contains(c):
            raise DomainError(f"eigenvalue centre {c} is not in the domain")
    wall = min(omega.boundary_distance(c) for c in centers)
    r = min(sep / 2, wall)
    if math.isinf(r):
        r = max(1.0, float(np.linalg.norm(A, 2)))
    r *= SAFETY
    if spread >= r / 2:
        raise ClusterError(f"cluster spread {spread:.3e} is not small against the disc radius {r:.3e}")

    analytic = _analytic_delta(A, r - spread)
    sampled = math.inf
    rng = np.random.default_rng(seed)
    if trials > 0:
        sampled = r / n
        for _ in range(80):
            good = True
            for _t in range(trials):
                H = sampled * np.exp(2j * np.pi * rng.uniform(size=(n, n)))
                if not _counts_ok(eigenvalues(A + H, tol), centers, mults, r, tol):
                    good = False
                    break
            if good:
                break
            sampled /= 2
        else:
            sampled = 0.0
    delta = min(analytic, sampled)
    if not delta > 0:
        raise ClusterError("no positive polydisc radius could be certified")
    cert = {
        "method": "min(analytic, sampled)",
        "analytic": analytic,
        "sampled": None if math.isinf(sampled) else sampled,
        "binding": "analytic" if analytic <= sampled else "sampled",
        "trials": int(trials),
        "seed": int(seed),
        "cluster_spread": spread,
        "below_resolution": bool(delta < 8 * EPS * max(1.0, float(np.max(np.abs(A))))),
    }
    return ClusterData(A, tuple(centers), tuple(mults), float(r), float(delta), cert, omega, tol)


# --- theta and tau ----------------------------------------------------------------------------


def theta(W, cluster: ClusterData, check_polydisc: bool = True) -> ThetaPoint:
    """Per-cluster symmetric functions of the eigenvalues of ``W``.

    With ``check_polydisc=False`` the caller takes responsibility for ``W`` being
    close enough to the base; the disc-count checks still run.
    """
    W = as_matrix(W)
    if W.shape != cluster.base.shape:
        raise ValueError(f"shape {W.shape} does not match base {cluster.base.shape}")
    if check_polydisc:
        dev = float(np.max(np.abs(W - cluster.base)))
        # allow for the rounding of forming W = A + H
        slack = 8 * EPS * max(1.0, float(np.max(np.abs(cluster.base))))
        if dev >= cluster.delta + slack:
            raise PreconditionError(f"W is outside the polydisc: entry deviation {dev:.3e} >= {cluster.delta:.3e}", dev)
    ev = eigenvalues(W, cluster.tol)
    idx = _assign(ev, cluster.centers, cluster.r, cluster.tol)
    comps = []
    for i, ni in enumerate(cluster.multiplicities):
        sel = ev[idx == i]
        if sel.size != ni:
            raise ClusterError(f"disc around {cluster.centers[i]} holds {sel.size} eigenvalues, expected {ni}")
        comps.append(sym_poly(sel))
    return ThetaPoint(tuple(comps))


def tau(components) -> np.ndarray:
    """Coefficient point of the product of the ``P_{x_i}``."""
    comps = components.components if isinstance(components, ThetaPoint) else components
    poly = np.array([1.0 + 0j])
    for x in comps:
        poly = np.convolve(poly, to_monic(x))
    return from_monic(poly)


def _tau_jacobian(comps) -> np.ndarray:
    sizes = [len(x) for x in comps]
    n = sum(sizes)
    monics = [to_monic(x) for x in comps]
    cols = []
    for i, ni in enumerate(sizes):
        others = np.array([1.0 + 0j])
        for l, p in enumerate(monics):
            if l != i:
                others = np.convolve(others, p)
        for j in range(1, ni + 1):
            # d P / d (x_i)_j = (-1)^j t^(n_i - j) * prod_{l != i} P_l
            mono = np.zeros(ni - j + 1, dtype=complex)
            mono[0] = (-1) ** j
            poly = np.convolve(mono, others)
            full = np.zeros(n + 1, dtype=complex)
            full[n + 1 - poly.size:] = poly
            cols.append(((-1.0) ** np.arange(1, n + 1)) * full[1:])
    return np.array(cols).T


def tau_local_inverse(y, cluster: ClusterData, polish: int = 3) -> ThetaPoint:
    """Split ``P_y`` into its per-disc factors.

    Roots are assigned to discs, the factors are formed from them and then
    refined by Newton steps on ``tau(x) = y`` (the Jacobian of ``tau`` is a
    Sylvester-type matrix, invertible because the factors have disjoint roots).
    """
    y = as_coeffs(y)
    if y.size != cluster.n:
        raise ValueError(f"coefficient point has size {y.size}, cluster expects {cluster.n}")
    roots = roots_of(y)
    idx = _assign(roots, cluster.centers, cluster.r, cluster.tol)
    comps = []
    for i, ni in enumerate(cluster.multiplicities):
        sel = roots[idx == i]
        if sel.size != ni:
            raise ClusterError(f"disc around {cluster.centers[i]} holds {sel.size} roots, expected {ni}")
        comps.append(sym_poly(sel))
    sizes = list(cluster.multiplicities)
    x = np.concatenate(comps)
    res = np.linalg.norm(tau(ThetaPoint.from_flat(x, sizes).components) - y)
    for _ in range(polish):
        if res == 0:
            break
        J = _tau_jacobian(ThetaPoint.from_flat(x, sizes).components)
        step = np.linalg.solve(J, tau(ThetaPoint.from_flat(x, sizes).components) - y)
        x_new = x - step
        res_new = np.linalg.norm(tau(ThetaPoint.from_flat(x_new, sizes).components) - y)
        if not res_new < res:
            break
        x, res = x_new, res_new
    return ThetaPoint.from_flat(x, sizes)


# --- local basis and perturbation directions ----------------------------------------------


def local_basis_block(lam: complex, ni: int) -> np.ndarray:
    """Columns ``v_j`` with ``(v_j)_k = C(n_i - j, k - j) lam^(k - j)`` for ``k >= j``."""
    B = np.zeros((ni, ni), dtype=complex)
    for j in range(1, ni + 1):
        for k in range(j, ni + 1):
            B[k - 1, j - 1] = comb(ni - j, k - j, exact=True) * lam ** (k - j)
    return B


def basis_identity_residual(lam: complex, ni: int, B: np.ndarray) -> float:
    """Coefficientwise check of ``P_{base + eta v_j} = (t - lam)^n_i + (-1)^j eta (t - lam)^(n_i - j)``.

    The map ``x -> P_x`` is affine, so checking the ``eta``-linear part suffices.
    """
    worst = 0.0
    base = sym_poly(np.full(ni, lam))
    p0 = to_monic(base)
    for j in range(1, ni + 1):
        lin = to_monic(base + B[:, j - 1]) - p0
        target = np.zeros(ni + 1, dtype=complex)
        target[j:] = (-1) ** j * np.poly(np.full(ni - j, lam)) if ni > j else (-1) ** j
        scale = max(1.0, float(np.max(np.abs(target))))
        worst = max(worst, float(np.max(np.abs(lin - target))) / scale)
    return worst


def local_basis(cluster: ClusterData) -> LocalBasis:
    blocks = []
    conds = []
    worst = 0.0
    for lam, ni in zip(cluster.centers, cluster.multiplicities):
        B = local_basis_block(lam, ni)
        blocks.append(B)
        conds.append(float(np.linalg.cond(B)))
        worst = max(worst, basis_identity_residual(lam, ni, B))
    n = cluster.n
    M = np.zeros((n, n), dtype=complex)
    off = cluster.offsets
    for i, B in enumerate(blocks):
        M[off[i]:off[i + 1], off[i]:off[i + 1]] = B
    return LocalBasis(tuple(blocks), M, tuple(conds), worst)


def _require_diagonal_zero_cluster(cluster: ClusterData, i0: int) -> np.ndarray:
    A = cluster.base
    if not 0 <= i0 < cluster.m:
        raise IndexError(f"cluster index {i0} out of range")
    if abs(cluster.centers[i0]) > 10 * cluster.tol:
        raise PreconditionError(
            f"cluster {i0} is centred at {cluster.centers[i0]}, not 0; translate the base by its centre first",
            abs(cluster.centers[i0]))
    off = A - np.diag(np.diag(A))
    if np.max(np.abs(off), initial=0.0) > cluster.tol:
        raise PreconditionError("base matrix is not diagonal", float(np.max(np.abs(off))))
    d = np.diag(A)
    return np.flatnonzero(np.abs(d - cluster.centers[i0]) < cluster.r)


def dk_matrix(cluster: ClusterData, i0: int, k: int) -> np.ndarray:
    """Diagonal direction carrying the roots of ``x^k + 1`` in the first ``k`` slots of cluster ``i0``.

    Along it, ``theta(A + s D_k) = theta(A) + (-1)^k s^k E_k`` in cluster ``i0``.
    """
    pos = _require_diagonal_zero_cluster(cluster, i0)
    ni = cluster.multiplicities[i0]
    if not 1 <= k <= ni:
        raise ValueError(f"k must lie in 1..{ni}")
    omegas = np.exp(1j * np.pi * (2 * np.arange(1, k + 1) - 1) / k)
    D = np.zeros_like(cluster.base)
    D[pos[:k], pos[:k]] = omegas
    return D


def dk_shift_residual(cluster: ClusterData, i0: int, k: int, eps: float) -> float:
    """Deviation of ``theta(A + eps^(1/k) D_k)`` from ``theta(A) + (-1)^k eps E_k``."""
    D = dk_matrix(cluster, i0, k)
    base = theta(cluster.base, cluster, check_polydisc=False).flat
    got = theta(cluster.base + eps ** (1.0 / k) * D, cluster, check_polydisc=False).flat
    target = base.copy()
    target[cluster.offsets[i0] + k - 1] += (-1) ** k * eps
    return float(np.max(np.abs(got - target)))


def conjugate_map_F(G: Callable, cluster: ClusterData, x: ThetaPoint) -> ThetaPoint:
    """``tau^{-1} o G o tau`` in the clustered chart."""
    return tau_local_inverse(G(tau(x)), cluster)


# --- block trace ------------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockTraceReport:
    block: np.ndarray
    trace: float | complex
    trace_error: float
    structure_deviation: float  # max |block - I| on and below the diagonal
    refinement_gap: float  # disagreement between the two step sizes used
    fixed_point_deviation: float
    derivative_deviation: float
    holds: bool

    def to_json(self) -> dict:
        b = self.block
        return {
            "block": {"re": b.real.tolist(), "im": b.imag.tolist()},
            "trace": [complex(self.trace).real, complex(self.trace).imag],
            "trace_error": self.trace_error,
            "structure_deviation": self.structure_deviation,
            "refinement_gap": self.refinement_gap,
            "fixed_point_deviation": self.fixed_point_deviation,
            "derivative_deviation": self.derivative_deviation,
            "holds": self.holds,
        }


def derivative_identity_deviation(psi: Callable, A: np.ndarray, h: float = 1e-3, directions: int = 4,
                                  seed: int = 0) -> tuple[float, float]:
    """``(||psi(A) - A||, max_H ||D psi(A) H - H||)`` over random unit directions."""
    A = as_matrix(A)
    n = A.shape[0]
    fix = float(np.max(np.abs(psi(A) - A)))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(directions):
        H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H /= np.linalg.norm(H)
        d, _ = holomorphic_derivative(psi, A, H, h)
        worst = max(worst, float(np.max(np.abs(d - H))))
    return fix, worst


def _stencil_coefficient(g: Callable, k: int, h: float, points: int) -> np.ndarray:
    """Taylor coefficient of ``s^k`` of ``g`` from samples on the circle ``|s| = h``."""
    w = np.exp(2j * np.pi * np.arange(points) / points)
    acc = 0
    for wm in w:
        acc = acc + g(h * wm) * wm ** (-k)
    return acc / (points * h ** k)


def _central_coefficient(g: Callable, k: int, h: float) -> np.ndarray:
    """Taylor coefficient of ``s^k`` from the ``k``-th central difference (error ``O(h^2)``)."""
    acc = 0
    for j in range(k + 1):
        acc = acc + (-1) ** j * comb(k, j, exact=True) * g((k / 2 - j) * h)
    return acc / (h ** k * math.factorial(k))


def verify_block_trace(cluster: ClusterData, psi: Callable, i0: int | None = None, step: float | None = None,
                       points: int = 16, trace_tol: float = 1e-3, structure_tol: float = 1e-4,
                       method: str = "central") -> BlockTraceReport:
    """Cluster-``i0`` diagonal block of ``F'(theta(A))`` in the local basis.

    Column ``k`` is ``(-1)^k`` times the ``s^k`` Taylor coefficient of
    ``theta_{i0}(psi(A + s D_k))``. With ``method="stencil"`` it is read off a
    ``points``-point roots-of-unity stencil of radius ``step`` (default
    ``0.25 min(r, 1)``). With ``method="central"`` it is the ``k``-th central
    difference at ``step`` (default ``1e-4``) with one Richardson step against
    ``step / 10``. ``refinement_gap`` compares the result with a stencil at
    ``step / 2`` or with the unrefined central difference. At a zero centre the
    local basis of cluster ``i0`` is the standard one.
    """
    if method not in ("stencil", "central"):
        raise ValueError(f"unknown method {method!r}")
    if i0 is None:
        zero = [i for i, c in enumerate(cluster.centers) if abs(c) <= 10 * cluster.tol]
        if not zero:
            raise PreconditionError("no cluster is centred at 0; translate A by the chosen eigenvalue first "
                                    "(see Translation and coeff_translate)", min(abs(c) for c in cluster.centers))
        i0 = zero[0]
    _require_diagonal_zero_cluster(cluster, i0)
    A = cluster.base
    fix, der = derivative_identity_deviation(psi, A)
    if fix > 1e-6 or der > 1e-6:
        raise PreconditionError(f"psi(A) = A and psi'(A) = I fail: deviations {fix:.3e}, {der:.3e}", max(fix, der))
    ni = cluster.multiplicities[i0]
    off = cluster.offsets[i0]
    if method == "stencil":
        h = step if step is not None else 0.25 * min(cluster.r, 1.0)
    else:
        h = step if step is not None else 1e-4
    block = np.zeros((ni, ni), dtype=complex)
    block_check = np.zeros((ni, ni), dtype=complex)
    for k in range(1, ni + 1):
        D = dk_matrix(cluster, i0, k)

        def g(s, D=D):
            return theta(psi(A + s * D), cluster, check_polydisc=False).flat[off:off + ni]

        if method == "stencil":
            block[:, k - 1] = (-1) ** k * _stencil_coefficient(g, k, h, points)
            block_check[:, k - 1] = (-1) ** k * _stencil_coefficient(g, k, h / 2, points)
        else:
            coarse = _central_coefficient(g, k, h)
            fine = _central_coefficient(g, k, h / 10)
            block[:, k - 1] = (-1) ** k * (100 * fine - coarse) / 99
            block_check[:, k - 1] = (-1) ** k * coarse
    tr = np.trace(block)
    trace_error = float(abs(tr - ni))
    lower = np.tril(block - np.eye(ni))
    structure = float(np.max(np.abs(lower)))
    gap = float(np.max(np.abs(block - block_check)))
    holds = trace_error <= trace_tol and structure <= structure_tol
    trace_out = float(tr.real) if abs(tr.imag) < 1e-12 else complex(tr)
    return BlockTraceReport(block, trace_out, trace_error, structure, gap, fix, der, holds)
