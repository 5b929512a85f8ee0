"""Dense complex matrix primitives.

Every other module consumes matrices as ``(n, n)`` complex numpy arrays; this
module owns validation, serialization and the spectral primitives
(characteristic polynomial, eigenvalues, exponential, operator norm, minimal
polynomial degree, Jordan structure).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClusterError, ConvergenceError, NonFiniteError, SpecCartanError

EPS = np.finfo(float).eps
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_TRANSPORT_TOL = 1e-7


class ExpOverflowError(SpecCartanError, OverflowError):
    """Matrix exponential would overflow double precision."""


# --------------------------------------------------------------------------
# construction / validation / serialization
# --------------------------------------------------------------------------


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a validated square complex array (copy-free when possible)."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix has non-finite entries")
    return A


def matrix_to_json(M) -> dict:
    A = as_matrix(M)
    return {"n": A.shape[0], "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    A = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    A = as_matrix(A)
    if A.shape[0] != obj["n"]:
        raise ValueError(f"declared n={obj['n']} but entries are {A.shape[0]}x{A.shape[0]}")
    return A


def jordan_block(size: int, eigenvalue: complex = 0.0) -> np.ndarray:
    """Upper Jordan block ``J_size(eigenvalue)``."""
    return eigenvalue * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)


def direct_sum(*blocks) -> np.ndarray:
    n = sum(np.shape(b)[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        b = np.atleast_2d(np.asarray(b, dtype=complex))
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def elementary(n: int, j: int, k: int) -> np.ndarray:
    """``E_{j,k}`` with 1-based indices."""
    E = np.zeros((n, n), dtype=complex)
    E[j - 1, k - 1] = 1.0
    return E


def canonical_order(values) -> np.ndarray:
    """Sort lexicographically by (Re, Im) after rounding to 12 decimals."""
    v = np.asarray(values, dtype=complex).ravel()
    key_re = np.round(v.real, 12)
    key_im = np.round(v.imag, 12)
    idx = np.lexsort((key_im, key_re))
    return v[idx]


# --------------------------------------------------------------------------
# characteristic polynomial and polynomial roots
# --------------------------------------------------------------------------


def faddeev_leverrier(M) -> np.ndarray:
    """Monic characteristic polynomial ``det(tI - M)``, highest degree first.

    Returns ``[1, a_1, ..., a_n]`` with ``det(tI - M) = t^n + a_1 t^{n-1} + ... + a_n``.
    """
    A = as_matrix(M)
    n = A.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    I = np.eye(n, dtype=complex)
    Mk = I.copy()
    for k in range(1, n + 1):
        AM = A @ Mk
        coeffs[k] = -np.trace(AM) / k
        Mk = AM + coeffs[k] * I
    return coeffs


def faddeev_leverrier_object(A: np.ndarray, one) -> list:
    """Faddeev-LeVerrier over an object-dtype matrix whose entries share the type of ``one``.

    Used with multiprecision scalars, where the arithmetic runs at the
    scalars' own precision.
    """
    n = A.shape[0]
    I = np.full((n, n), 0 * one, dtype=object)
    for i in range(n):
        I[i, i] = one
    coeffs = [one]
    Mk = I.copy()
    for k in range(1, n + 1):
        AM = A.dot(Mk)
        ck = -sum(AM[i, i] for i in range(n)) / k
        coeffs.append(ck)
        Mk = AM + ck * I
    return coeffs


def _fujiwara_radius(coeffs: np.ndarray) -> float:
    n = len(coeffs) - 1
    mags = [abs(coeffs[k]) ** (1.0 / k) for k in range(1, n + 1)]
    mags[-1] = (abs(coeffs[n]) / 2.0) ** (1.0 / n)
    return 2.0 * max(mags) if mags else 0.0


def _taylor_shift(coeffs: np.ndarray, c: complex) -> np.ndarray:
    """Coefficients (highest first) of ``p(t + c)``."""
    a = np.array(coeffs, dtype=complex)
    n = len(a) - 1
    for i in range(n):
        for j in range(1, n + 1 - i):
            a[j] += c * a[j - 1]
    return a


def poly_roots(coeffs, max_iter: int = 800) -> np.ndarray:
    """Roots of a polynomial by Aberth-Ehrlich simultaneous iteration.

    ``coeffs`` is highest degree first; the leading coefficient must be nonzero.
    Initial guesses sit on a circle about the root centroid, rotated by a fixed
    offset so the start is deterministic. Exact trailing zeros are deflated as
    zero roots before iterating.
    """
    a = np.asarray(coeffs, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("polynomial has non-finite coefficients")
    if a[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    a = a / a[0]
    zeros = 0
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
        zeros += 1
    n = len(a) - 1
    if n == 0:
        return np.zeros(zeros, dtype=complex)
    if n == 1:
        return np.concatenate([[-a[1]], np.zeros(zeros, dtype=complex)])

    center = -a[1] / n
    shifted = _taylor_shift(a, center)
    radius = _fujiwara_radius(shifted)
    if radius == 0.0:
        return np.concatenate([np.full(n, center), np.zeros(zeros, dtype=complex)])

    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = 0.5 * radius * np.exp(1j * angles)

    d = np.polyder(shifted)
    absc = np.abs(shifted)
    converged = np.zeros(n, dtype=bool)
    backward = np.inf
    for _ in range(max_iter):
        for i in range(n):
            if converged[i]:
                continue
            zi = z[i]
            p = np.polyval(shifted, zi)
            scale = np.polyval(absc, abs(zi))
            if abs(p) <= 4 * EPS * scale:
                converged[i] = True
                continue
            dp = np.polyval(d, zi)
            diff = zi - np.delete(z, i)
            if np.any(diff == 0):
                z[i] = zi + 1e-3 * radius * np.exp(1j * (i + 1))
                continue
            s = np.sum(1.0 / diff)
            ratio = p / dp if dp != 0 else np.inf
            if not np.isfinite(ratio):
                z[i] = zi + 1e-3 * radius * np.exp(1j * (i + 1))
                continue
            w = ratio / (1.0 - ratio * s)
            z[i] = zi - w
            if abs(w) <= 2 * EPS * max(1.0, abs(z[i])):
                converged[i] = True
        if converged.all():
            break
    else:
        vals = np.abs(np.polyval(shifted, z)) / np.maximum(np.polyval(absc, np.abs(z)), 1e-300)
        backward = float(vals.max())
        # multiple roots stall at the backward-error floor; accept that
        if backward > 1e3 * EPS:
            raise ConvergenceError(
                f"Aberth iteration did not converge in {max_iter} sweeps", residual=backward
            )
    roots = z + center
    return np.concatenate([roots, np.zeros(zeros, dtype=complex)])


# --------------------------------------------------------------------------
# spectra
# --------------------------------------------------------------------------


def eigenvalues(M, tol: float = DEFAULT_RESIDUAL_TOL, method: str = "qr") -> np.ndarray:
    """Eigenvalues with algebraic multiplicity, canonically ordered.

    ``method="qr"`` uses the LAPACK Hessenberg-QR path; ``method="charpoly"``
    roots the Faddeev-LeVerrier polynomial with Aberth iteration. Both results
    are checked against the characteristic polynomial: the relative residual
    ``|det(lambda I - M)| / sum (|a_k| + ||M||^k) |lambda|^(n-k)`` must be at
    most ``tol``. The ``||M||^k`` terms reflect the absolute accuracy of the
    computed coefficients, so exact zero eigenvalues are not penalised.
    """
    A = as_matrix(M)
    coeffs = faddeev_leverrier(A)
    if method == "qr":
        try:
            vals = np.linalg.eigvals(A)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"QR iteration failed: {exc}") from exc
    elif method == "charpoly":
        vals = poly_roots(coeffs)
    else:
        raise ValueError(f"unknown eigenvalue method {method!r}")
    resid = charpoly_residual(coeffs, vals, scale=float(np.linalg.norm(A, 2)))
    if resid > tol:
        raise ConvergenceError(
            f"eigenvalue residual {resid:.3e} exceeds tolerance", residual=resid
        )
    return canonical_order(vals)


def charpoly_residual(coeffs, values, scale: float = 0.0) -> float:
    """Largest relative residual of ``values`` as roots of ``coeffs``.

    ``scale`` adds ``scale^k`` to the modulus of the ``k``-th coefficient in the
    denominator (the absolute size of its rounding error).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return 0.0
    num = np.abs(np.polyval(coeffs, values))
    weights = np.abs(coeffs) + scale ** np.arange(coeffs.size)
    weights[0] = np.abs(coeffs[0])
    den = np.polyval(weights, np.abs(values))
    return float(np.max(num / np.maximum(den, 1e-300)))


def operator_norm(M) -> float:
    """Largest singular value."""
    A = as_matrix(M)
    return float(np.linalg.norm(A, 2))


def matrix_exp(M) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor kernel.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 0.5, where an
    18-term Taylor polynomial is accurate to well below double precision.
    """
    A = as_matrix(M)
    n = A.shape[0]
    norm = float(np.linalg.norm(A, 1))
    if norm > 700.0 * n:
        raise ExpOverflowError(f"1-norm {norm:.3e} too large for a finite exponential")
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    X = A / (2.0 ** s)
    I = np.eye(n, dtype=complex)
    E = I.copy()
    term = I.copy()
    for k in range(1, 19):
        term = term @ X / k
        E = E + term
    for _ in range(s):
        E = E @ E
    if not np.all(np.isfinite(E)):
        raise ExpOverflowError("exponential overflowed during squaring")
    return E


# --------------------------------------------------------------------------
# minimal polynomial
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MinPolyResult:
    degree: int
    residuals: tuple
    tol: float
    uncertain: bool = False

    def __int__(self):
        return self.degree


def min_poly_degree(M, tol: float = DEFAULT_RESIDUAL_TOL) -> MinPolyResult:
    """Degree of the minimal polynomial from a Krylov sequence in matrix space.

    The matrix is first centred and scaled (``(M - mu I) / rho``), which leaves the
    degree unchanged. An orthonormal basis ``Q_0 = I/sqrt(n), Q_1, ...`` of
    ``span{I, B, B^2, ...}`` is grown Arnoldi-style: ``B^d`` lies in the span of
    lower powers exactly when ``B Q_{d-1}`` does. The residual of that
    projection (absolute, since every ``B Q_k`` has norm at most 1) is compared with ``tol``; residuals within a factor 10 of ``tol``
    mark the result uncertain.
    """
    A = as_matrix(M)
    n = A.shape[0]
    mu = np.trace(A) / n
    B = A - mu * np.eye(n)
    rho = np.linalg.norm(B, 2)
    if rho <= tol * max(1.0, abs(mu)):
        return MinPolyResult(1, (0.0,), tol, False)
    B = B / rho
    Q = [np.eye(n, dtype=complex) / math.sqrt(n)]
    residuals = []
    uncertain = False
    for d in range(1, n + 1):
        V = B @ Q[-1]
        for _ in range(2):
            for q in Q:
                V = V - np.vdot(q, V) * q
        # absolute: ||B||_2 = 1 and ||Q_{d-1}||_F = 1, so ||B Q_{d-1}||_F <= 1
        res = float(np.linalg.norm(V))
        residuals.append(res)
        if tol / 10 < res < tol * 10:
            uncertain = True
        if res <= tol:
            return MinPolyResult(d, tuple(residuals), tol, uncertain)
        Q.append(V / np.linalg.norm(V))
    # Cayley-Hamilton: degree n always suffices
    return MinPolyResult(n, tuple(residuals), tol, uncertain)


# --------------------------------------------------------------------------
# eigenvalue clustering and Jordan structure
# --------------------------------------------------------------------------


def cluster_values(values, radius: float) -> list[list[int]]:
    """Single-linkage groups of indices whose chained distances are <= radius."""
    v = np.asarray(values, dtype=complex)
    n = v.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(v[i] - v[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(groups.values())
    out.sort(key=lambda g: (round(np.mean(v[g]).real, 12), round(np.mean(v[g]).imag, 12)))
    return out


def default_cluster_radius(M) -> float:
    A = as_matrix(M)
    return 1e-3 * max(1.0, float(np.max(np.abs(np.linalg.eigvals(A)))))


@dataclass(frozen=True)
class JordanProfile:
    """Jordan block sizes per eigenvalue cluster."""

    blocks: tuple  # ((eigenvalue, (size, size, ...)), ...)
    tol: float
    cluster_radius: float
    rank_sequences: tuple = field(default=(), compare=False)

    def sizes(self) -> list[tuple[complex, tuple]]:
        return [(lam, tuple(s)) for lam, s in self.blocks]

    def matches(self, other: "JordanProfile", tol: float = 1e-6) -> bool:
        if len(self.blocks) != len(other.blocks):
            return False
        for (l1, s1), (l2, s2) in zip(self.blocks, other.blocks):
            if abs(l1 - l2) > tol or tuple(s1) != tuple(s2):
                return False
        return True


def _numerical_rank(X: np.ndarray, thresh: float) -> int:
    s = np.linalg.svd(X, compute_uv=False)
    return int(np.sum(s > thresh))


def jordan_profile(M, tol: float = DEFAULT_TRANSPORT_TOL, cluster_radius: float | None = None) -> JordanProfile:
    """Recover Jordan block sizes from rank sequences of ``(M - lambda I)^k``.

    Eigenvalues are grouped by single linkage at ``cluster_radius`` (default
    ``1e-3 * max(1, spectral radius)``); each group's mean is its eigenvalue.
    Distinct groups must be more than ``10 * cluster_radius`` apart. Ranks use
    the threshold ``tol * max(1, ||M - lambda I||)^k``.
    """
    A = as_matrix(M)
    n = A.shape[0]
    vals = np.linalg.eigvals(A)
    radius = default_cluster_radius(A) if cluster_radius is None else cluster_radius
    groups = cluster_values(vals, radius)
    centers = [complex(np.mean(vals[g])) for g in groups]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) <= 10 * radius:
                raise ClusterError(
                    f"eigenvalue clusters at {centers[i]:.6g} and {centers[j]:.6g} are closer "
                    f"than 10 x cluster radius {radius:.3g}"
                )
    I = np.eye(n, dtype=complex)
    blocks = []
    sequences = []
    for lam, g in zip(centers, groups):
        m = len(g)
        N = A - lam * I
        scale = max(1.0, float(np.linalg.norm(N, 2)))
        ranks = [n]
        P = I.copy()
        for k in range(1, m + 1):
            P = P @ N
            ranks.append(_numerical_rank(P, tol * scale ** k))
            if n - ranks[-1] >= m:
                break
        if n - ranks[-1] != m:
            raise ClusterError(
                f"rank sequence {ranks} at eigenvalue {lam:.6g} does not reach nullity {m}"
            )
        ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
        sizes = []
        for k in range(1, len(ranks)):
            sizes.extend([k] * (ge[k - 1] - ge[k]))
        sizes.sort(reverse=True)
        blocks.append((lam, tuple(sizes)))
        sequences.append(tuple(ranks))
    return JordanProfile(tuple(blocks), tol, radius, tuple(sequences))


# --------------------------------------------------------------------------
# holomorphic differentiation
# --------------------------------------------------------------------------


def holomorphic_derivative(f, x, direction, step: float = 1e-3) -> tuple[np.ndarray, float]:
    """Derivative of a holomorphic ``f`` at ``x`` along ``direction``.

    The four-point stencil ``[f(x+h) - f(x-h) - i f(x+ih) + i f(x-ih)] / 4h``
    has truncation error ``O(h^4)``; one Richardson step with ``h/2`` removes
    it to ``O(h^8)``. Returns the estimate and its disagreement with the
    half-step stencil.
    """
    x = np.asarray(x, dtype=complex)
    d = np.asarray(direction, dtype=complex)

    def stencil(h):
        acc = 0
        for w in (1, 1j, -1, -1j):
            acc = acc + np.conj(w) * np.asarray(f(x + h * w * d), dtype=complex)
        return acc / (4 * h)

    coarse = stencil(step)
    fine = stencil(step / 2)
    est = (16 * fine - coarse) / 15
    return est, float(np.max(np.abs(est - fine)))
