import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_vectors, seeds
from speccartan.errors import NonFiniteError
from speccartan.generators import ginibre, similarity_factor
from speccartan.matrix_core import (
    as_matrix,
    canonical_order,
    direct_sum,
    eigenvalues,
    elementary,
    faddeev_leverrier,
    holomorphic_derivative,
    jordan_block,
    jordan_profile,
    matrix_exp,
    matrix_from_json,
    matrix_to_json,
    min_poly_degree,
    operator_norm,
    poly_roots,
)
from speccartan.perturbation_bounds import bottleneck_distance


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(NonFiniteError):
        as_matrix(np.array([[np.nan, 0], [0, 1]]))


def test_matrix_json_roundtrip(rng):
    M = ginibre(4, rng)
    obj = matrix_to_json(M)
    assert obj["n"] == 4 and set(obj) == {"n", "re", "im"}
    assert np.array_equal(matrix_from_json(obj), M)


def test_elementary_is_one_based():
    E = elementary(3, 1, 2)
    assert E[0, 1] == 1 and np.count_nonzero(E) == 1


# eigenvalues -----------------------------------------------------------------


def test_eigenvalues_diagonal():
    assert np.allclose(eigenvalues(np.diag([1.0, 2.0])), [1, 2])


def test_eigenvalues_nilpotent_block():
    assert np.allclose(eigenvalues(jordan_block(2)), [0, 0], atol=1e-7)


def test_eigenvalues_companion_cubic():
    # oracle: rational-root search on t^3 - 6t^2 + 11t - 6
    p = [1, -6, 11, -6]
    rational = [r for r in range(-6, 7) if np.polyval(p, r) == 0]
    C = np.array([[0, 0, 6], [1, 0, -11], [0, 1, 6]], dtype=complex)
    for method in ("qr", "charpoly"):
        assert bottleneck_distance(eigenvalues(C, method=method), rational) < 1e-9


@given(seeds())
def test_eigenvalues_similarity_invariant(seed):
    rng = np.random.default_rng(seed)
    M = ginibre(5, rng)
    S = similarity_factor(5, rng, 1e3)
    moved = eigenvalues(S @ M @ np.linalg.inv(S))
    assert bottleneck_distance(eigenvalues(M), moved) <= 1e-7


@given(seeds())
def test_eigenvalue_methods_agree(seed):
    M = ginibre(4, np.random.default_rng(seed))
    assert bottleneck_distance(eigenvalues(M, method="qr"), eigenvalues(M, method="charpoly")) <= 1e-7


def test_eigenvalues_zero_matrix():
    assert np.array_equal(eigenvalues(np.zeros((3, 3))), np.zeros(3))


def test_canonical_order_is_permutation_invariant(rng):
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert np.array_equal(canonical_order(v), canonical_order(v[::-1]))


# Faddeev-LeVerrier and roots -------------------------------------------------


@given(seeds())
def test_faddeev_leverrier_matches_numpy(seed):
    M = ginibre(5, np.random.default_rng(seed))
    assert np.allclose(faddeev_leverrier(M), np.poly(M), atol=1e-10)


@given(complex_vectors(1, 7))
def test_poly_roots_recovers_separated_roots(roots):
    roots = roots + 5.0 * np.arange(roots.size)
    got = poly_roots(np.poly(roots))
    assert bottleneck_distance(got, roots) <= 1e-7 * (1 + np.max(np.abs(roots)))


def test_poly_roots_deflates_zero_roots():
    got = poly_roots([1, -1, 0, 0])
    assert bottleneck_distance(got, [0, 0, 1]) < 1e-14


# norms and exponential -------------------------------------------------------


@pytest.mark.parametrize("M, expected", [
    (np.zeros((2, 2)), 0.0),
    (np.diag([3, -4j]), 4.0),
    (elementary(2, 1, 2), 1.0),
])
def test_operator_norm_examples(M, expected):
    assert operator_norm(M) == pytest.approx(expected, abs=1e-14)


def test_matrix_exp_examples():
    assert np.allclose(matrix_exp(np.zeros((3, 3))), np.eye(3))
    a, b = 0.3 + 1j, -2.0
    assert np.allclose(matrix_exp(np.diag([a, b])), np.diag([np.exp(a), np.exp(b)]))
    assert np.allclose(matrix_exp(jordan_block(2)), np.eye(2) + jordan_block(2))


@given(seeds())
def test_matrix_exp_matches_scipy(seed):
    M = 3 * ginibre(4, np.random.default_rng(seed))
    assert np.allclose(matrix_exp(M), scipy.linalg.expm(M), rtol=1e-10, atol=1e-12)


# minimal polynomial and Jordan structure -------------------------------------


def test_min_poly_examples(rng):
    assert min_poly_degree(np.zeros((3, 3))).degree == 1
    assert min_poly_degree(direct_sum(jordan_block(2), jordan_block(1))).degree == 2
    x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    C = np.zeros((5, 5), dtype=complex)
    C[np.arange(1, 5), np.arange(4)] = 1
    C[:, -1] = -np.poly(x)[1:][::-1]
    assert min_poly_degree(C).degree == 5


def test_jordan_profile_examples(rng):
    prof = jordan_profile(np.diag([5.0, 5.0, 7.0]))
    assert [(complex(lam), tuple(s)) for lam, s in prof.blocks] == [(5, (1, 1)), (7, (1,))]
    prof = jordan_profile(direct_sum(jordan_block(2), jordan_block(1)))
    assert [tuple(s) for _, s in prof.blocks] == [(2, 1)]
    S = similarity_factor(3, rng, 10.0)
    prof = jordan_profile(S @ jordan_block(3, 2.0) @ np.linalg.inv(S))
    assert len(prof.blocks) == 1 and tuple(prof.blocks[0][1]) == (3,)
    assert abs(prof.blocks[0][0] - 2) < 1e-4


# holomorphic derivative ------------------------------------------------------


def test_holomorphic_derivative_of_square(rng):
    A = ginibre(3, rng)
    H = ginibre(3, rng)
    d, err = holomorphic_derivative(lambda X: X @ X, A, H)
    assert np.allclose(d, A @ H + H @ A, atol=1e-12)
    assert err < 1e-10
