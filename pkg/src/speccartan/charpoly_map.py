"""The coefficient map and its companions.

Coefficient points use the signed convention

    P_z(t) = t^n + sum_{j=1..n} (-1)^j z_j t^(n-j),

so that ``z = sym_poly(roots)`` lists the elementary symmetric functions of the
roots, and ``char_coeffs(W)`` lists those of the eigenvalues of ``W``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .matrix_core import (
    DEFAULT_TRANSPORT_TOL,
    MinPolyResult,
    as_matrix,
    elementary,
    faddeev_leverrier,
    min_poly_degree,
    poly_roots,
)

COEFF_SCHEMA = "signed: P_z(t) = t^n + sum_j (-1)^j z_j t^(n-j)"


def _signs(n: int) -> np.ndarray:
    return (-1.0) ** np.arange(1, n + 1)


def as_coeffs(z) -> np.ndarray:
    x = np.atleast_1d(np.asarray(z, dtype=complex))
    if x.ndim != 1 or x.size < 1:
        raise ValueError("coefficient point must be a non-empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("coefficient point has non-finite entries")
    return x


def coeffs_to_json(z) -> dict:
    x = as_coeffs(z)
    return {"n": x.size, "convention": COEFF_SCHEMA, "re": x.real.tolist(), "im": x.imag.tolist()}


def coeffs_from_json(obj: dict) -> np.ndarray:
    x = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    x = as_coeffs(x)
    if x.size != obj["n"]:
        raise ValueError(f"declared n={obj['n']} but got {x.size} coordinates")
    return x


# --- polynomial bridge -------------------------------------------------------


def to_monic(z) -> np.ndarray:
    """Monic coefficients of ``P_z``, highest degree first: ``[1, -z_1, z_2, ...]``."""
    x = as_coeffs(z)
    return np.concatenate([[1.0 + 0j], _signs(x.size) * x])


def from_monic(coeffs) -> np.ndarray:
    """Inverse of :func:`to_monic`; the leading coefficient is normalised away."""
    a = np.asarray(coeffs, dtype=complex)
    a = a / a[0]
    n = a.size - 1
    return _signs(n) * a[1:]


def to_plain(z) -> np.ndarray:
    """Plain coefficients ``a_j`` with ``P_z(t) = t^n + sum a_j t^(n-j)``."""
    x = as_coeffs(z)
    return _signs(x.size) * x


def from_plain(a) -> np.ndarray:
    a = as_coeffs(a)
    return _signs(a.size) * a


def eval_P(x, t):
    """Horner evaluation of ``P_x`` at ``t`` (scalar or array)."""
    return np.polyval(to_monic(x), t)


def sym_poly(roots) -> np.ndarray:
    """Elementary symmetric functions ``(e_1, ..., e_n)`` of ``roots``."""
    r = np.atleast_1d(np.asarray(roots, dtype=complex))
    e = np.zeros(r.size + 1, dtype=complex)
    e[0] = 1.0
    for k, root in enumerate(r, start=1):
        e[1:k + 1] = e[1:k + 1] + root * e[0:k]
    return e[1:]


def roots_of(x) -> np.ndarray:
    """Roots of ``P_x`` (Aberth-Ehrlich)."""
    return poly_roots(to_monic(x))


# --- coefficient map and its right inverse ---------------------------------------


def char_coeffs(W) -> np.ndarray:
    """``c(W)``: signed characteristic coefficients by Faddeev-LeVerrier."""
    return from_monic(faddeev_leverrier(W))


def companion(x) -> np.ndarray:
    """Companion matrix of ``P_x``: ones on the subdiagonal, last column ``-a_n, ..., -a_1``."""
    a = to_plain(x)
    n = a.size
    C = np.zeros((n, n), dtype=complex)
    if n > 1:
        C[np.arange(1, n), np.arange(n - 1)] = 1.0
    C[:, n - 1] = -a[::-1]
    return C


# --- exact derivative ----------------------------------------------------------


@dataclass(frozen=True)
class JacobianReport:
    base: np.ndarray
    matrix: np.ndarray  # n x n^2, column index = row-major flattening of (i, j)
    singular_values: np.ndarray
    rank: int
    tol: float

    def apply(self, H) -> np.ndarray:
        """Directional derivative ``c'(A) H``."""
        return self.matrix @ np.asarray(H, dtype=complex).ravel()


def _jacobian_matrix(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    # p_j = tr(A^j); d p_j / d A_{ab} = j (A^{j-1})_{ba}
    powers = [np.eye(n, dtype=complex)]
    for _ in range(n):
        powers.append(powers[-1] @ A)
    p = np.array([np.trace(powers[j]) for j in range(n + 1)])
    dp = [np.zeros(n * n, dtype=complex)]
    for j in range(1, n + 1):
        dp.append(j * powers[j - 1].T.ravel())
    # Newton: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    e = [1.0 + 0j]
    de = [np.zeros(n * n, dtype=complex)]
    for k in range(1, n + 1):
        val = 0j
        dval = np.zeros(n * n, dtype=complex)
        for i in range(1, k + 1):
            sgn = (-1) ** (i - 1)
            val += sgn * e[k - i] * p[i]
            dval += sgn * (de[k - i] * p[i] + e[k - i] * dp[i])
        e.append(val / k)
        de.append(dval / k)
    return np.array(de[1:])


def jacobian_c(A, tol: float = DEFAULT_TRANSPORT_TOL) -> JacobianReport:
    """Exact derivative ``c'(A)`` as an ``n x n^2`` matrix via Newton's identities.

    Rank counts singular values above ``tol * sigma_max``.
    """
    A = as_matrix(A)
    J = _jacobian_matrix(A)
    s = np.linalg.svd(J, compute_uv=False)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    return JacobianReport(A, J, s, rank, tol)


def jacobian_fd(A, H, step: float = 1e-5) -> np.ndarray:
    """Central difference of ``c`` at ``A`` along ``H`` (cross-check oracle)."""
    A = as_matrix(A)
    H = np.asarray(H, dtype=complex)
    return (char_coeffs(A + step * H) - char_coeffs(A - step * H)) / (2 * step)


# --- rank theorem ---------------------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    holds: bool
    jacobian_rank: int
    minpoly: MinPolyResult
    singular_values: tuple
    uncertain: bool


# relative singular-value cut at the normalised point used by verify_rank_theorem
NORMALISED_RANK_TOL = 1e-12


def _normalise(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    B = A - (np.trace(A) / n) * np.eye(n)
    rho = np.linalg.norm(B, 2)
    if rho <= 1e-12 * max(1.0, float(np.linalg.norm(A, 2))):
        return np.zeros_like(B)
    return B / rho


def verify_rank_theorem(A, tol: float = NORMALISED_RANK_TOL, minpoly_tol: float = 1e-8) -> RankReport:
    """Compare ``rank c'(A)`` with the minimal polynomial degree.

    The rank is taken at ``(A - mu I) / rho`` (trace-centred, unit norm). Scalar
    shifts and nonzero scalings leave the rank of ``c'`` unchanged: a shift
    composes with the coefficient translation (a biholomorphism) and a scaling
    with the invertible diagonal ``diag(rho^k)``. At that point vanishing
    directions sit near ``1e-16`` while genuine ones stay above ``1e-9`` for
    ``n <= 6``, hence the default cut. A singular value within a factor 10 of the
    cut flags the case as uncertain.
    """
    A = as_matrix(A)
    rep = jacobian_c(_normalise(A), tol)
    mp = min_poly_degree(A, minpoly_tol)
    s = rep.singular_values
    band = (s > tol * s[0] / 10) & (s < tol * s[0] * 10) if s[0] > 0 else np.zeros_like(s, bool)
    uncertain = mp.uncertain or bool(band.any())
    return RankReport(rep.rank == mp.degree, rep.rank, mp, tuple(float(v) for v in s), uncertain)


def _jordan_blocks_of(A: np.ndarray, tol: float) -> list[int]:
    """Block sizes of a matrix already in upper Jordan form with zero diagonal."""
    n = A.shape[0]
    sizes = []
    size = 1
    for i in range(n - 1):
        if abs(A[i, i + 1] - 1) <= tol:
            size += 1
        else:
            sizes.append(size)
            size = 1
    sizes.append(size)
    return sizes


def diagonal_block_squares(sizes) -> list[tuple[int, int]]:
    """1-based inclusive index ranges of each diagonal block."""
    out = []
    start = 1
    for r in sizes:
        out.append((start, start + r - 1))
        start += r
    return out


def nilpotent_kernel_probe(A, j: int, k: int, tol: float = 1e-9) -> bool:
    """Whether ``c'(A)`` annihilates ``E_{j,k}`` for a nilpotent Jordan-form ``A``.

    Whenever ``(j, k)`` falls outside every diagonal block square, ``E_{j,k}``
    is in the kernel; entries inside a block may or may not be.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if np.linalg.norm(np.linalg.matrix_power(A, n)) > tol:
        raise PreconditionError("matrix is not nilpotent", deviation=float(np.linalg.norm(np.linalg.matrix_power(A, n))))
    if not (1 <= j <= n and 1 <= k <= n):
        raise IndexError(f"({j}, {k}) out of range for n={n}")
    image = jacobian_c(A).apply(elementary(n, j, k))
    return bool(np.linalg.norm(image) <= tol)


def nilpotent_block_sizes(A, tol: float = 1e-12) -> list[int]:
    """Jordan block sizes read off the superdiagonal of a Jordan-form nilpotent."""
    return _jordan_blocks_of(as_matrix(A), tol)
