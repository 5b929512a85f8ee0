"""Spectral perturbation bounds, bottleneck matching and the openness witness.

The root-continuity bound here works with *plain* monic coefficients
``p(t) = t^n + a_1 t^(n-1) + ... + a_n``; everything else in the library uses the
signed convention of :mod:`speccartan.charpoly_map`. :func:`plain_from_point` and
:func:`point_from_plain` are the only crossing points.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .charpoly_map import as_coeffs, char_coeffs, from_plain, roots_of, to_plain
from .domains import DomainSpec
from .errors import DomainError, PreconditionError
from .matrix_core import as_matrix, eigenvalues, matrix_to_json, operator_norm, poly_roots

GUARD = 1e-12
EXHAUSTIVE_MAX = 6
NORMALITY_TOL = 1e-10


def plain_from_point(z) -> np.ndarray:
    return to_plain(z)


def point_from_plain(a) -> np.ndarray:
    return from_plain(a)


def digest(obj) -> str:
    """sha256 of the canonical JSON encoding of ``obj``."""
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _vec_json(v) -> dict:
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


# --- matching -------------------------------------------------------------------


@dataclass(frozen=True)
class MatchResult:
    permutation: tuple  # 0-based: s1[j] is paired with s2[permutation[j]]
    bottleneck: float
    method: str

    def to_json(self) -> dict:
        return {"permutation": list(self.permutation), "bottleneck": self.bottleneck, "method": self.method}


def _distances(s1, s2) -> np.ndarray:
    a = np.atleast_1d(np.asarray(s1, dtype=complex))
    b = np.atleast_1d(np.asarray(s2, dtype=complex))
    if a.size != b.size:
        raise ValueError(f"spectra have different lengths {a.size} and {b.size}")
    return np.abs(b[None, :] - a[:, None])


def _match_exhaustive(D: np.ndarray) -> MatchResult:
    n = D.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=int)
    costs = D[np.arange(n), perms].max(axis=1)
    best = int(np.argmin(costs))
    return MatchResult(tuple(int(p) for p in perms[best]), float(costs[best]), "exhaustive")


def _feasible(D: np.ndarray, t: float):
    graph = csr_matrix((D <= t).astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return match if np.all(match >= 0) else None


def _match_threshold(D: np.ndarray) -> MatchResult:
    cands = np.unique(D)
    lo, hi = 0, cands.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(D, cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    match = _feasible(D, cands[lo])
    perm = tuple(int(p) for p in match)
    return MatchResult(perm, float(D[np.arange(D.shape[0]), list(perm)].max()), "threshold-matching")


def bottleneck_match(s1, s2, method: str = "auto") -> MatchResult:
    """Permutation minimising ``max_j |s2[pi(j)] - s1[j]|``.

    ``auto`` enumerates all permutations up to n = 6 and otherwise binary-searches
    the candidate distances with a bipartite matching feasibility test.
    """
    D = _distances(s1, s2)
    if D.size == 0:
        return MatchResult((), 0.0, "exhaustive")
    if method == "auto":
        method = "exhaustive" if D.shape[0] <= EXHAUSTIVE_MAX else "threshold-matching"
    if method == "exhaustive":
        return _match_exhaustive(D)
    if method == "threshold-matching":
        return _match_threshold(D)
    raise ValueError(f"unknown matching method {method!r}")


def bottleneck_distance(s1, s2) -> float:
    return bottleneck_match(s1, s2).bottleneck


# --- bound reports ----------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    kind: str
    lhs: float
    rhs: float
    slack: float
    inputs_digest: str
    verdict: str
    inputs: dict = field(repr=False, default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self, with_inputs: bool = False) -> dict:
        out = {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
               "inputs_digest": self.inputs_digest, "verdict": self.verdict}
        if with_inputs:
            out["inputs"] = self.inputs
        return out


def _report(kind: str, lhs: float, rhs: float, inputs: dict) -> BoundReport:
    verdict = "holds" if lhs <= rhs + GUARD else "violated"
    return BoundReport(kind, float(lhs), float(rhs), float(rhs - lhs), digest(inputs), verdict, inputs)


def normality_residual(X) -> float:
    X = as_matrix(X)
    return float(np.linalg.norm(X @ X.conj().T - X.conj().T @ X, 2))


def check_sun_bound(X, Y) -> BoundReport:
    """Bottleneck distance of spectra against ``n ||X - Y||_op`` for normal ``X``."""
    X = as_matrix(X)
    Y = as_matrix(Y)
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch {X.shape} vs {Y.shape}")
    res = normality_residual(X)
    scale = max(np.linalg.norm(X, 2) ** 2, 1e-300)
    if res > NORMALITY_TOL * scale:
        raise PreconditionError(f"X is not normal: ||XX* - X*X|| = {res:.3e}", deviation=res)
    n = X.shape[0]
    lhs = bottleneck_distance(eigenvalues(X), eigenvalues(Y))
    rhs = n * operator_norm(X - Y)
    return _report("sun", lhs, rhs, {"X": matrix_to_json(X), "Y": matrix_to_json(Y)})


def ostrowski_T(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    j = np.arange(1, a.size + 1)
    return float(max(1.0, np.max(np.abs(a) ** (1.0 / j)), np.max(np.abs(b) ** (1.0 / j))))


def ostrowski_radius(a, b) -> float:
    """``4 n T ||a - b||_2^(1/n)`` for plain monic coefficient vectors."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    n = a.size
    return 4 * n * ostrowski_T(a, b) * float(np.linalg.norm(a - b)) ** (1.0 / n)


def _plain_roots(a) -> np.ndarray:
    return poly_roots(np.concatenate([[1.0 + 0j], np.asarray(a, dtype=complex)]))


def check_ostrowski_bound(a, b) -> BoundReport:
    """Root bottleneck of two monic polynomials against the root-continuity bound.

    ``a`` and ``b`` are plain coefficients ``(a_1, ..., a_n)`` of
    ``t^n + a_1 t^(n-1) + ... + a_n``.
    """
    a = as_coeffs(a)
    b = as_coeffs(b)
    if a.size != b.size:
        raise ValueError(f"degree mismatch {a.size} vs {b.size}")
    lhs = bottleneck_distance(_plain_roots(a), _plain_roots(b))
    rhs = ostrowski_radius(a, b)
    return _report("ostrowski", lhs, rhs, {"a": _vec_json(a), "b": _vec_json(b)})


# --- openness witness -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    Y: np.ndarray
    displacement: float  # ||Y - X||_op
    matched_shift: float  # max |mu_j - lambda_j|
    trust_radius: float
    coeff_error: float


def openness_witness(X, y, omega: DomainSpec | None = None) -> Witness:
    """A matrix ``Y`` near ``X`` with ``c(Y) = y``.

    ``X = Q (D + U) Q*`` is a complex Schur form; the roots of ``P_y`` are paired
    with ``diag(D)`` by bottleneck matching and substituted on the diagonal, so
    ``||Y - X||_op`` equals the largest matched root shift.
    """
    X = as_matrix(X)
    y = as_coeffs(y)
    n = X.shape[0]
    if y.size != n:
        raise ValueError(f"coefficient point has size {y.size}, matrix is {n}x{n}")
    omega = omega or DomainSpec.whole_plane()
    T, Q = scipy.linalg.schur(X, output="complex")
    lam = np.diag(T).copy()
    mu = roots_of(y)
    m = bottleneck_match(lam, mu)
    mu = mu[list(m.permutation)]
    trust = ostrowski_radius(to_plain(char_coeffs(X)), to_plain(y))
    if m.bottleneck > trust * (1 + 1e-9) + GUARD:
        raise PreconditionError(
            f"matched root shift {m.bottleneck:.3e} exceeds the trust radius {trust:.3e}",
            deviation=m.bottleneck - trust)
    bad = [complex(v) for v in mu if not omega.contains(v)]
    if bad:
        excess = max(-omega.boundary_distance(v) for v in bad)
        raise DomainError(f"root {bad[0]} lies outside the domain (excess {excess:.3e})")
    Tn = T.copy()
    Tn[np.diag_indices(n)] = mu
    Y = Q @ Tn @ Q.conj().T
    return Witness(Y, operator_norm(Y - X), m.bottleneck, trust,
                   float(np.max(np.abs(char_coeffs(Y) - y))))
