"""Self-maps of spectral sets, their induced coefficient maps, and iteration.

A self-map ``Psi`` of ``S_n(Omega)`` induces ``G_Psi = c o Psi o companion`` on
coefficient space. The variants here form a small closed algebra: holomorphic
functional calculus, conjugation, translation, ``W -> exp(W - I)``, composition,
and second-order perturbations of a base point used as test maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
import numpy as np
import scipy.linalg

from .charpoly_map import as_coeffs, char_coeffs, companion, from_monic, roots_of, sym_poly, to_monic
from .domains import DomainSpec
from .errors import DomainError, PreconditionError
from .generators import similarity_factor
from .matrix_core import (
    as_matrix,
    eigenvalues,
    faddeev_leverrier_object,
    holomorphic_derivative,
    jordan_profile,
    matrix_exp,
    matrix_from_json,
    matrix_to_json,
    min_poly_degree,
)
from .perturbation_bounds import bottleneck_distance

SERIES_TAIL = 1e-12
FIXED_POINT_TOL = 1e-9
UNIMODULAR_BAND = 1e-4


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _vjson(v) -> dict:
    v = np.asarray(v, dtype=complex)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def _vload(obj) -> np.ndarray:
    return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)


def _horner(coeffs, W: np.ndarray) -> np.ndarray:
    """``sum_k coeffs[k] W^k`` (ascending coefficients)."""
    n = W.shape[0]
    out = np.zeros_like(W)
    I = np.eye(n, dtype=complex)
    for c in reversed(np.asarray(coeffs, dtype=complex)):
        out = out @ W + c * I
    return out


# --- self-maps -------------------------------------------------------------------------------


@dataclass(frozen=True)
class SelfMap:
    """Base class. ``domain`` constrains inputs, ``codomain`` outputs (default: same)."""

    domain: DomainSpec = field(default_factory=DomainSpec.whole_plane, kw_only=True)
    codomain: DomainSpec | None = field(default=None, kw_only=True)

    def _apply(self, W: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, W) -> np.ndarray:
        return apply(self, W)

    def _tag(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        out = self._tag()
        out["domain"] = self.domain.to_json()
        if self.codomain is not None:
            out["codomain"] = self.codomain.to_json()
        return out


@dataclass(frozen=True)
class Identity(SelfMap):
    def _apply(self, W):
        return W.copy()

    def _tag(self):
        return {"type": "identity"}


@dataclass(frozen=True)
class FunctionalCalculus(SelfMap):
    """``W -> h(W)`` for a scalar ``h``.

    ``kind`` is ``polynomial`` (ascending ``coeffs``), ``rational``
    (``coeffs / denom``, both ascending), ``series`` (named entire or
    disc-convergent series: ``exp`` or ``geometric``) or ``square-perturbation``
    (``h(z) = z + coeffs[0] * prod_i (z - roots_i)^2``, evaluated in product form).
    """

    kind: str = "polynomial"
    coeffs: tuple = (0.0, 1.0)
    denom: tuple | None = None
    series: str | None = None
    roots: tuple | None = None

    @classmethod
    def polynomial(cls, coeffs, **kw):
        return cls(kind="polynomial", coeffs=tuple(complex(c) for c in coeffs), **kw)

    @classmethod
    def rational(cls, num, den, **kw):
        return cls(kind="rational", coeffs=tuple(complex(c) for c in num),
                   denom=tuple(complex(c) for c in den), **kw)

    @classmethod
    def named_series(cls, name, **kw):
        if name not in ("exp", "geometric"):
            raise ValueError(f"unknown series {name!r}")
        return cls(kind="series", coeffs=(), series=name, **kw)

    @classmethod
    def minpoly_fixing(cls, A, c: complex = 0.1, **kw):
        """``h(z) = z + c m_A(z)^2``: fixes ``A`` with derivative ``I`` there."""
        prof = jordan_profile(A)
        roots = tuple(complex(lam) for lam, sizes in prof.blocks for _ in range(max(sizes)))
        return cls(kind="square-perturbation", coeffs=(complex(c),), roots=roots, **kw)

    @property
    def radius(self) -> float:
        return 1.0 if self.series == "geometric" else math.inf

    def scalar(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "polynomial":
            return np.polyval(np.asarray(self.coeffs)[::-1], z)
        if self.kind == "rational":
            return np.polyval(np.asarray(self.coeffs)[::-1], z) / np.polyval(np.asarray(self.denom)[::-1], z)
        if self.kind == "square-perturbation":
            m = np.ones_like(z)
            for r in self.roots:
                m = m * (z - r)
            return z + self.coeffs[0] * m * m
        if self.series == "exp":
            return np.exp(z)
        return 1.0 / (1.0 - z)

    def _apply(self, W):
        if self.kind == "polynomial":
            return _horner(self.coeffs, W)
        if self.kind == "rational":
            Q = _horner(self.denom, W)
            return np.linalg.solve(Q, _horner(self.coeffs, W))
        if self.kind == "square-perturbation":
            I = np.eye(W.shape[0], dtype=complex)
            M = I.copy()
            for r in self.roots:
                M = M @ (W - r * I)
            return W + self.coeffs[0] * (M @ M)
        return self._series(W)

    def _series(self, W):
        """Truncated series with a rigorous tail bound.

        ``exp`` is summed at ``W / 2^s`` with ``||W / 2^s|| <= 1`` and squared
        back ``s`` times.
        """
        n = W.shape[0]
        norm = float(np.linalg.norm(W, 2))
        s = 0
        if self.series == "geometric":
            if norm >= 1:
                raise DomainError(f"geometric series tail cannot be bounded: ||W|| = {norm:.3f} >= 1")
        elif norm > 1:
            s = int(math.ceil(math.log2(norm)))
            W = W / 2 ** s
            norm /= 2 ** s
        term = np.eye(n, dtype=complex)
        out = term.copy()
        for k in range(1, 2000):
            term = term @ W / k if self.series == "exp" else term @ W
            out = out + term
            # remaining tail after the k-th term
            if self.series == "exp":
                tail = math.exp((k + 1) * math.log(max(norm, 1e-300)) - math.lgamma(k + 2)) / (1 - norm / (k + 2))
            else:
                tail = norm ** (k + 1) / (1 - norm)
            if tail < SERIES_TAIL:
                for _ in range(s):
                    out = out @ out
                return out
        raise DomainError("series tail bound not reached within 2000 terms")

    def _tag(self):
        out = {"type": "functional-calculus", "kind": self.kind, "coeffs": _vjson(self.coeffs)}
        if self.denom is not None:
            out["denom"] = _vjson(self.denom)
        if self.series is not None:
            out["series"] = self.series
        if self.roots is not None:
            out["roots"] = _vjson(self.roots)
        return out


@dataclass(frozen=True)
class Conjugation(SelfMap):
    """``W -> S^{-1} W S``."""

    S: np.ndarray = field(default_factory=lambda: np.eye(1, dtype=complex))

    def _apply(self, W):
        return np.linalg.solve(self.S, W @ self.S)

    def _tag(self):
        return {"type": "conjugation", "S": matrix_to_json(self.S)}


@dataclass(frozen=True)
class Translation(SelfMap):
    """``W -> W - lam I``."""

    lam: complex = 0.0

    def _apply(self, W):
        return W - self.lam * np.eye(W.shape[0])

    def _tag(self):
        return {"type": "translation", "lambda": _cjson(self.lam)}


@dataclass(frozen=True)
class ExpShift(SelfMap):
    """``W -> exp(W - I)``."""

    def _apply(self, W):
        return matrix_exp(W - np.eye(W.shape[0]))

    def _tag(self):
        return {"type": "exp-shift"}


@dataclass(frozen=True)
class Composition(SelfMap):
    """``maps[0] o maps[1] o ... o maps[-1]`` (the last map acts first)."""

    maps: tuple = ()

    def _apply(self, W):
        for f in reversed(self.maps):
            W = apply(f, W)
        return W

    def _tag(self):
        return {"type": "composition", "maps": [f.to_json() for f in self.maps]}


@dataclass(frozen=True)
class SecondOrderPerturbation(SelfMap):
    """``W -> W + (W - A)^2 E`` (``left``) or ``W + (W - A) E (W - A)`` (``sandwich``).

    Fixes ``A`` with derivative ``I``; not spectrum-determined in general.
    """

    A: np.ndarray = field(default_factory=lambda: np.zeros((1, 1), dtype=complex))
    E: np.ndarray = field(default_factory=lambda: np.zeros((1, 1), dtype=complex))
    mode: str = "left"

    def _apply(self, W):
        D = W - self.A
        return W + (D @ D @ self.E if self.mode == "left" else D @ self.E @ D)

    def _tag(self):
        return {"type": "second-order-perturbation", "A": matrix_to_json(self.A),
                "E": matrix_to_json(self.E), "mode": self.mode}


@dataclass(frozen=True)
class SecondOrderConjugation(SelfMap):
    """``W -> exp(-K) W exp(K)`` with ``K = (W - A) E (W - A)``: spectrum preserving, fixes ``A``."""

    A: np.ndarray = field(default_factory=lambda: np.zeros((1, 1), dtype=complex))
    E: np.ndarray = field(default_factory=lambda: np.zeros((1, 1), dtype=complex))

    def _apply(self, W):
        D = W - self.A
        K = D @ self.E @ D
        return matrix_exp(-K) @ W @ matrix_exp(K)

    def _tag(self):
        return {"type": "second-order-conjugation", "A": matrix_to_json(self.A), "E": matrix_to_json(self.E)}


def selfmap_from_json(obj: dict) -> SelfMap:
    kw = {"domain": DomainSpec.from_json(obj["domain"])}
    if "codomain" in obj:
        kw["codomain"] = DomainSpec.from_json(obj["codomain"])
    t = obj["type"]
    if t == "identity":
        return Identity(**kw)
    if t == "functional-calculus":
        return FunctionalCalculus(kind=obj["kind"], coeffs=tuple(_vload(obj["coeffs"]).tolist()),
                                  denom=tuple(_vload(obj["denom"]).tolist()) if "denom" in obj else None,
                                  series=obj.get("series"),
                                  roots=tuple(_vload(obj["roots"]).tolist()) if "roots" in obj else None, **kw)
    if t == "conjugation":
        return Conjugation(S=matrix_from_json(obj["S"]), **kw)
    if t == "translation":
        return Translation(lam=complex(*obj["lambda"]), **kw)
    if t == "exp-shift":
        return ExpShift(**kw)
    if t == "composition":
        return Composition(maps=tuple(selfmap_from_json(m) for m in obj["maps"]), **kw)
    if t == "second-order-perturbation":
        return SecondOrderPerturbation(A=matrix_from_json(obj["A"]), E=matrix_from_json(obj["E"]),
                                       mode=obj["mode"], **kw)
    if t == "second-order-conjugation":
        return SecondOrderConjugation(A=matrix_from_json(obj["A"]), E=matrix_from_json(obj["E"]), **kw)
    raise ValueError(f"unknown self-map type {t!r}")


# --- application and domains ----------------------------------------------------------------


def domain_margin(W, omega: DomainSpec) -> float:
    """Smallest signed distance from an eigenvalue of ``W`` to the complement of ``omega``."""
    if omega.shape == "whole-plane":
        return math.inf
    return min(omega.boundary_distance(v) for v in eigenvalues(W))


def domain_membership(W, omega: DomainSpec) -> bool:
    return domain_margin(W, omega) > 0


def apply(psi: SelfMap, W) -> np.ndarray:
    """Evaluate ``psi`` at ``W`` with domain and codomain checks."""
    W = as_matrix(W)
    if psi.domain.shape != "whole-plane" and not domain_membership(W, psi.domain):
        raise DomainError(f"spectrum of the argument leaves the domain (margin {domain_margin(W, psi.domain):.3e})")
    out = psi._apply(W)
    if not np.all(np.isfinite(out)):
        raise DomainError("self-map produced non-finite entries")
    cod = psi.codomain if psi.codomain is not None else psi.domain
    if cod.shape != "whole-plane" and not domain_membership(out, cod):
        raise DomainError(f"image spectrum leaves the codomain (margin {domain_margin(out, cod):.3e})")
    return out


# --- entire curves ----------------------------------------------------------------------------


@dataclass(frozen=True)
class EntireCurve:
    """``f(zeta) = exp(-C zeta) (D + zeta U) exp(C zeta)`` through ``W`` at ``zeta = 1``."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray  # C = V diag(L) V*
    L: np.ndarray

    def __call__(self, zeta: complex) -> np.ndarray:
        zeta = complex(zeta)
        left = (self.V * np.exp(-self.L * zeta)) @ self.V.conj().T
        right = (self.V * np.exp(self.L * zeta)) @ self.V.conj().T
        return left @ (self.D + zeta * self.U) @ right

    @property
    def C(self) -> np.ndarray:
        return (self.V * self.L) @ self.V.conj().T

    def log10_condition(self, zeta: complex) -> float:
        """``log10`` of the condition number of ``exp(C zeta)``."""
        growth = (self.L * complex(zeta)).real
        return float(np.ptp(growth)) / math.log(10) if growth.size else 0.0

    def working_digits(self, zeta: complex) -> int:
        """Decimal digits that keep ``c(f(zeta))`` accurate to well below ``1e-8``."""
        n = self.D.shape[0]
        size = 1.0 + float(np.max(np.abs(self.D), initial=0.0)) + abs(zeta) * float(np.max(np.abs(self.U), initial=0.0))
        return 30 + math.ceil(2 * self.log10_condition(zeta) + n * math.log10(size))

    def coefficients(self, zeta: complex, dps: int | None = None) -> np.ndarray:
        """``c(f(zeta))`` with ``f(zeta)`` formed and reduced in extended precision.

        For non-real ``zeta`` the factor ``exp(C zeta)`` is far from unitary, and
        ``f(zeta)`` in double precision carries errors of order ``eps`` times its
        squared condition number. Here ``exp(C zeta) = V e^{L zeta} V^{-1}`` with
        ``V^{-1}`` refined to the working precision, so the similarity is exact
        to that precision.
        """
        zeta = complex(zeta)
        digits = dps if dps is not None else self.working_digits(zeta)
        with gmpy2.context(gmpy2.get_context(), precision=math.ceil(digits * 3.33) + 8):
            V = _to_mpc(self.V)
            Vinv = _refined_inverse(V, self.V.conj().T, digits)
            z = gmpy2.mpc(zeta)
            grow = np.array([gmpy2.exp(gmpy2.mpc(complex(l)) * z) for l in self.L], dtype=object)
            left = (V / grow[None, :]).dot(Vinv)
            right = (V * grow[None, :]).dot(Vinv)
            M = _to_mpc(self.D) + z * _to_mpc(self.U)
            f = left.dot(M).dot(right)
            monic = faddeev_leverrier_object(f, gmpy2.mpc(1))
            out = np.array([complex(c) for c in monic], dtype=complex)
        return from_monic(out)


def _to_mpc(M: np.ndarray) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    for idx, v in np.ndenumerate(M):
        out[idx] = gmpy2.mpc(complex(v))
    return out


def _refined_inverse(V: np.ndarray, guess: np.ndarray, digits: int) -> np.ndarray:
    """Newton-Schulz refinement ``X <- X (2I - V X)`` of a double-precision inverse."""
    n = V.shape[0]
    two = np.full((n, n), gmpy2.mpc(0), dtype=object)
    for i in range(n):
        two[i, i] = gmpy2.mpc(2)
    X = _to_mpc(guess)
    correct = 14.0
    while correct < digits + 5:
        X = X.dot(two - V.dot(X))
        correct *= 2
    return X


def make_entire_curve(W) -> EntireCurve:
    """Schur ``W = Q (D + U) Q*``; ``C`` is the principal logarithm of ``Q*``.

    ``Q*`` is unitary, so its complex Schur form is diagonal and gives the
    logarithm through a unitary eigenbasis.
    """
    W = as_matrix(W)
    T, Q = scipy.linalg.schur(W, output="complex")
    D = np.diag(np.diag(T))
    U = np.triu(T, 1)
    Qh = Q.conj().T
    R, V = scipy.linalg.schur(Qh, output="complex")
    off = float(np.max(np.abs(np.triu(R, 1)), initial=0.0))
    if off > 1e-10:
        raise PreconditionError(f"unitary Schur factor is not diagonalised (off-diagonal {off:.3e})", off)
    L = np.log(np.diag(R))
    return EntireCurve(D, U, V, L)


def entire_curve(W, zeta: complex) -> np.ndarray:
    return make_entire_curve(W)(zeta)


# --- induced coefficient maps ------------------------------------------------------------------


def balanced_companion(z) -> np.ndarray:
    """Companion matrix of ``z`` balanced by an exact power-of-two diagonal similarity.

    Same coefficients as ``companion(z)`` with far smaller norm, which keeps
    ``Psi`` and Faddeev-LeVerrier accurate for large coefficients. Falls back to
    the plain companion when the scaling would underflow or overflow.
    """
    C = companion(as_coeffs(z))
    with np.errstate(all="ignore"):
        B, (scale, _) = scipy.linalg.matrix_balance(C, permute=False, separate=True)
        exact = bool(np.all(np.isfinite(B))) and np.array_equal(B * scale[:, None] / scale[None, :], C)
    return B if exact else C


def induced_G(psi: SelfMap, z) -> np.ndarray:
    """``G_Psi(z) = c(Psi(K))`` for the balanced companion ``K`` of ``z``.

    Any representative of ``c^{-1}(z)`` gives the same value; the balanced
    companion is the best conditioned of the companion family.
    """
    return char_coeffs(apply(psi, balanced_companion(z)))


def coeff_translate(y, lam: complex) -> np.ndarray:
    """Coefficients of ``P_y(t - lam)``: every root moves by ``+lam``."""
    p = to_monic(y)
    n = p.size - 1
    # Taylor shift of the monic polynomial by -lam via repeated synthetic division
    q = p.astype(complex).copy()
    for i in range(n):
        for j in range(1, n + 1 - i):
            q[j] = q[j] - lam * q[j - 1]
    return from_monic(q)


def random_representative(z, rng: np.random.Generator, condition_cap: float = 1e2) -> np.ndarray:
    """A non-companion matrix with coefficients ``z``: similarity of ``diag(roots) + strict upper``."""
    z = as_coeffs(z)
    n = z.size
    T = np.diag(roots_of(z)) + np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 1)
    S = similarity_factor(n, rng, condition_cap)
    return S @ T @ np.linalg.inv(S)


@dataclass(frozen=True)
class DiagramReport:
    error: float
    tol: float
    holds: bool


def check_diagram(psi: SelfMap, W, tol: float = 1e-8) -> DiagramReport:
    """``c(Psi(W))`` against ``G_Psi(c(W))``, relative to ``max(1, |coefficients|)``."""
    W = as_matrix(W)
    lhs = char_coeffs(apply(psi, W))
    rhs = induced_G(psi, char_coeffs(W))
    err = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))))
    return DiagramReport(err, tol, err <= tol)


@dataclass(frozen=True)
class JacobianEstimate:
    matrix: np.ndarray
    error: float


def numeric_jacobian_G(psi: SelfMap, a, step: float = 1e-3) -> JacobianEstimate:
    """Columns ``G'(a) e_j`` from a Richardson-refined four-point complex stencil."""
    a = as_coeffs(a)
    n = a.size
    cols = []
    err = 0.0
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        col, e_j = holomorphic_derivative(lambda x: induced_G(psi, x), a, e, step)
        cols.append(col)
        err = max(err, e_j)
    return JacobianEstimate(np.array(cols).T, err)


# --- iteration and fixed sets ------------------------------------------------------------------


@dataclass(frozen=True)
class IterationReport:
    orbit: tuple
    converged: bool
    limit: np.ndarray | None
    derivative_spectrum: tuple
    unimodular_count: int
    contracting_count: int
    unresolved_count: int
    modulus_bound_checked: bool
    modulus_bound_holds: bool | None

    def to_json(self, verbose: bool = False) -> dict:
        out = {
            "converged": self.converged,
            "iterations": len(self.orbit) - 1,
            "limit": None if self.limit is None else _vjson(self.limit),
            "derivative_spectrum": _vjson(self.derivative_spectrum),
            "unimodular_count": self.unimodular_count,
            "contracting_count": self.contracting_count,
            "unresolved_count": self.unresolved_count,
            "modulus_bound_checked": self.modulus_bound_checked,
            "modulus_bound_holds": self.modulus_bound_holds,
        }
        if verbose:
            out["orbit"] = [_vjson(z) for z in self.orbit]
        return out


def classify_moduli(values, band: float = UNIMODULAR_BAND) -> tuple[int, int, int]:
    mods = np.abs(np.asarray(values))
    uni = int(np.sum(np.abs(mods - 1) <= band))
    con = int(np.sum(mods < 1 - band))
    return uni, con, mods.size - uni - con


def iterate_G(psi: SelfMap, z0, max_iter: int = 200, tol: float = FIXED_POINT_TOL) -> IterationReport:
    """Iterate ``G_Psi`` from ``z0`` until the step is below ``tol``."""
    z = as_coeffs(z0)
    n = z.size
    orbit = [z]
    converged = False
    for _ in range(max_iter):
        z_new = induced_G(psi, z)
        step = float(np.linalg.norm(z_new - z))
        if step < tol:
            converged = True
            break
        z = z_new
        orbit.append(z)
    if not converged:
        return IterationReport(tuple(orbit), False, None, (), 0, 0, n, False, None)
    jac = numeric_jacobian_G(psi, z).matrix
    mu = np.linalg.eigvals(jac)
    uni, con, unres = classify_moduli(mu)
    checked = psi.domain.complement_at_least(n)
    holds = bool(np.all(np.abs(mu) <= 1 + UNIMODULAR_BAND)) if checked else None
    return IterationReport(tuple(orbit), True, z, tuple(complex(v) for v in mu), uni, con, unres, checked, holds)


@dataclass(frozen=True)
class FixedSetReport:
    eig_one_count: int
    minpoly_degree: int
    theorem_holds: bool
    jacobian_spectrum: tuple
    fixed_point_deviation: float
    derivative_deviation: float


def derivative_deviation(psi: SelfMap, A, directions: int = 4, seed: int = 0,
                         step: float | None = None) -> tuple[float, float]:
    """``(||Psi(A) - A||_max, max_H ||Psi'(A) H - H||_max)`` over random unit directions.

    The default step is ``1e-3 / max(1, ||A||_2)``; high-degree maps at large
    ``A`` otherwise dominate the stencil error.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if step is None:
        step = 1e-3 / max(1.0, float(np.linalg.norm(A, 2)))
    fix = float(np.max(np.abs(apply(psi, A) - A)))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(directions):
        H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H /= np.linalg.norm(H)
        d, _ = holomorphic_derivative(lambda X: apply(psi, X), A, H, step)
        worst = max(worst, float(np.max(np.abs(d - H))))
    return fix, worst


def fixed_set_dim_lower_bound(psi: SelfMap, A, tol: float = 1e-7) -> FixedSetReport:
    """Count eigenvalues of ``G'_Psi(c(A))`` near 1 and compare with the minimal polynomial degree."""
    A = as_matrix(A)
    scale = max(1.0, float(np.max(np.abs(A))))
    fix, der = derivative_deviation(psi, A)
    if fix > tol * scale:
        raise PreconditionError(f"Psi(A) differs from A by {fix:.3e}", fix)
    if der > 10 * tol:
        raise PreconditionError(f"Psi'(A) differs from I by {der:.3e}", der)
    jac = numeric_jacobian_G(psi, char_coeffs(A)).matrix
    mu = np.linalg.eigvals(jac)
    ones = int(np.sum(np.abs(mu - 1) <= UNIMODULAR_BAND))
    deg = min_poly_degree(A).degree
    return FixedSetReport(ones, deg, ones >= deg, tuple(complex(v) for v in mu), fix, der)


# --- spectrum preservation ----------------------------------------------------------------------


@dataclass(frozen=True)
class PreservationReport:
    distances: tuple
    preserving: bool
    tol: float
    profiles_match: bool | None


def spectrum_preservation_check(psi: SelfMap, samples: Sequence, tol: float = 1e-8,
                                base=None) -> PreservationReport:
    """Bottleneck distances between ``sigma(W)`` and ``sigma(Psi(W))`` per sample.

    With ``base`` given, also compares the Jordan profiles of ``base`` and ``Psi(base)``.
    """
    dists = []
    for W in samples:
        W = as_matrix(W)
        dists.append(bottleneck_distance(eigenvalues(W), eigenvalues(apply(psi, W))))
    profiles = None
    if base is not None:
        B = as_matrix(base)
        profiles = jordan_profile(B).matches(jordan_profile(apply(psi, B)))
    return PreservationReport(tuple(dists), all(d <= tol for d in dists), tol, profiles)


def spectral_image(psi: FunctionalCalculus, z) -> np.ndarray:
    """Oracle for functional calculus: ``pi_n(h(root_1), ..., h(root_n))``."""
    return sym_poly(psi.scalar(roots_of(z)))
