"""Seeded matrix families for campaigns and tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charpoly_map import companion, sym_poly
from .matrix_core import direct_sum, jordan_block

KINDS = ("diagonal", "diagonalizable", "non-derogatory", "nilpotent-jordan", "random-jordan")

# well separated candidate eigenvalues: a jittered 3x3 grid of spacing 1
_GRID = np.array([a + 1j * b for a in (-1.0, 0.0, 1.0) for b in (-1.0, 0.0, 1.0)])


def ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(ginibre(n, rng))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def similarity_factor(n: int, rng: np.random.Generator, condition_cap: float = 1e3) -> np.ndarray:
    """Ginibre matrix with singular values floored at ``sigma_max / condition_cap``."""
    U, s, Vh = np.linalg.svd(ginibre(n, rng))
    s = np.maximum(s, s[0] / condition_cap)
    return (U * s) @ Vh


def random_partition(m: int, rng: np.random.Generator) -> list[int]:
    """Uniformly random composition of ``m`` turned into a descending partition."""
    cuts = sorted(rng.choice(np.arange(1, m), size=rng.integers(0, m), replace=False)) if m > 1 else []
    edges = [0, *cuts, m]
    parts = [edges[i + 1] - edges[i] for i in range(len(edges) - 1)]
    return sorted(parts, reverse=True)


def separated_eigenvalues(m: int, rng: np.random.Generator, jitter: float = 0.1) -> np.ndarray:
    if m > _GRID.size:
        raise ValueError(f"at most {_GRID.size} separated eigenvalues available")
    pts = rng.permutation(_GRID)[:m]
    return pts + jitter * (rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m))


@dataclass(frozen=True)
class JordanStructure:
    matrix: np.ndarray
    jordan_form: np.ndarray
    similarity: np.ndarray
    blocks: tuple  # ((eigenvalue, (sizes...)), ...)

    @property
    def minpoly_degree(self) -> int:
        return sum(max(sizes) for _, sizes in self.blocks)


def random_jordan_structure(n: int, rng: np.random.Generator, condition_cap: float = 1e3,
                            transport: bool = True) -> JordanStructure:
    mult = random_partition(n, rng)
    lams = separated_eigenvalues(len(mult), rng)
    blocks = []
    mats = []
    for lam, k in zip(lams, mult):
        sizes = random_partition(k, rng)
        blocks.append((complex(lam), tuple(sizes)))
        mats.extend(jordan_block(r, lam) for r in sizes)
    J = direct_sum(*mats)
    S = similarity_factor(n, rng, condition_cap) if transport else np.eye(n, dtype=complex)
    A = S @ J @ np.linalg.inv(S)
    return JordanStructure(A, J, S, tuple(blocks))


def generate_matrix(kind: str, n: int, seed: int, condition_cap: float = 1e3,
                    partition=None, transport: bool = True) -> np.ndarray:
    """Deterministic matrix of the requested family.

    ``nilpotent-jordan`` uses ``partition`` (descending block sizes) when given
    and is returned untransported unless ``transport`` is true.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    if kind == "diagonal":
        return np.diag(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    if kind == "diagonalizable":
        Q = random_unitary(n, rng)
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return (Q * d) @ Q.conj().T
    if kind == "non-derogatory":
        roots = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        # repeat one root so the family is not just the diagonalizable one
        if n >= 3:
            roots[1] = roots[0]
        C = companion(sym_poly(roots))
        S = similarity_factor(n, rng, condition_cap)
        return S @ C @ np.linalg.inv(S)
    if kind == "nilpotent-jordan":
        sizes = list(partition) if partition is not None else random_partition(n, rng)
        if sum(sizes) != n:
            raise ValueError(f"partition {sizes} does not sum to {n}")
        J = direct_sum(*(jordan_block(r) for r in sizes))
        if not transport:
            return J
        S = similarity_factor(n, rng, condition_cap)
        return S @ J @ np.linalg.inv(S)
    if kind == "random-jordan":
        return random_jordan_structure(n, rng, condition_cap).matrix
    raise ValueError(f"unknown matrix kind {kind!r}; expected one of {KINDS}")
