import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from speccartan.charpoly_map import char_coeffs, sym_poly
from speccartan.domains import DomainSpec
from speccartan.errors import DomainError, PreconditionError
from speccartan.generators import ginibre, random_unitary
from speccartan.matrix_core import elementary
from speccartan.perturbation_bounds import (
    bottleneck_distance,
    bottleneck_match,
    check_ostrowski_bound,
    check_sun_bound,
    digest,
    openness_witness,
    ostrowski_radius,
)


# matching --------------------------------------------------------------------


def test_bottleneck_examples():
    assert bottleneck_distance([1, 2], [2, 1]) == 0
    eps = 1e-3
    assert bottleneck_distance([0, 0], [eps, -eps]) == pytest.approx(eps)


@given(seeds(), st.integers(1, 6))
def test_matching_methods_agree(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    ex = bottleneck_match(a, b, "exhaustive")
    th = bottleneck_match(a, b, "threshold-matching")
    assert ex.bottleneck == th.bottleneck
    assert sorted(ex.permutation) == list(range(n))


@given(seeds())
def test_bottleneck_is_symmetric_and_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    d = bottleneck_distance(a, b)
    assert d == bottleneck_distance(b, a) == bottleneck_distance(a[::-1], rng.permutation(b))


def test_matching_length_mismatch():
    with pytest.raises(ValueError):
        bottleneck_distance([1, 2], [1])


# Sun bound -------------------------------------------------------------------


def test_sun_examples():
    eps = 1e-3
    X = np.diag([1.0, -1.0])
    rep = check_sun_bound(X, X + eps * elementary(2, 1, 2))
    assert rep.lhs == pytest.approx(0, abs=1e-15) and rep.rhs == pytest.approx(2 * eps) and rep.holds
    rep = check_sun_bound(np.zeros((2, 2)), np.array([[0, eps], [eps, 0]]))
    assert rep.lhs == pytest.approx(eps) and rep.rhs == pytest.approx(2 * eps) and rep.holds


def test_sun_requires_normal_X():
    with pytest.raises(PreconditionError):
        check_sun_bound(elementary(2, 1, 2), np.zeros((2, 2)))


@given(seeds(), st.integers(2, 6))
def test_sun_bound_property(seed, n):
    rng = np.random.default_rng(seed)
    Q = random_unitary(n, rng)
    X = (Q * (rng.standard_normal(n) + 1j * rng.standard_normal(n))) @ Q.conj().T
    E = ginibre(n, rng)
    E *= rng.uniform() / np.linalg.norm(E, 2)
    rep = check_sun_bound(X, X + E)
    assert rep.holds and rep.slack == pytest.approx(rep.rhs - rep.lhs)


# Ostrowski bound -------------------------------------------------------------


def test_ostrowski_examples():
    a = np.array([0.3 - 1j, 2.0])
    rep = check_ostrowski_bound(a, a)
    assert rep.lhs == 0 and rep.rhs == 0 and rep.holds
    eps = 0.25
    # t^2 vs t^2 - eps: roots 0,0 vs +-sqrt(eps), T = 1
    rep = check_ostrowski_bound([0, 0], [0, -eps])
    assert rep.lhs == pytest.approx(math.sqrt(eps))
    assert rep.rhs == pytest.approx(8 * math.sqrt(eps))


@given(seeds(), st.integers(2, 6), st.floats(-8, 0))
def test_ostrowski_bound_property(seed, n, log_size):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = a + 10 ** log_size * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    assert check_ostrowski_bound(a, b).holds


def test_ostrowski_radius_scales_with_root_of_distance():
    r1 = ostrowski_radius([0, 0, 0], [0, 0, 1e-6])
    r2 = ostrowski_radius([0, 0, 0], [0, 0, 8e-6])
    assert r2 / r1 == pytest.approx(2.0)


def test_report_digest_is_stable():
    rep1 = check_ostrowski_bound([1, 2], [1, 2.5])
    rep2 = check_ostrowski_bound([1, 2], [1, 2.5])
    assert rep1.inputs_digest == rep2.inputs_digest == digest(rep1.inputs)
    assert set(rep1.to_json()) == {"kind", "lhs", "rhs", "slack", "inputs_digest", "verdict"}


# openness witness ------------------------------------------------------------


def test_witness_at_own_coefficients(rng):
    X = ginibre(4, rng)
    w = openness_witness(X, char_coeffs(X))
    assert w.displacement <= 1e-12


def test_witness_diagonal_case():
    eps = 1e-5
    X = np.diag([1.0, 2.0]).astype(complex)
    w = openness_witness(X, sym_poly([1 + eps, 2]))
    assert w.displacement == pytest.approx(eps, rel=1e-6)
    assert np.allclose(np.sort(np.diag(w.Y).real), [1 + eps, 2])


@given(seeds(), st.integers(2, 5))
def test_witness_property(seed, n):
    rng = np.random.default_rng(seed)
    X = ginibre(n, rng)
    d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = char_coeffs(X) + 1e-4 * rng.uniform() * d / np.linalg.norm(d)
    w = openness_witness(X, y)
    assert w.coeff_error <= 1e-9
    assert w.displacement <= w.matched_shift + 1e-12 <= w.trust_radius + 1e-12


def test_witness_respects_domain():
    X = np.diag([0.5, 0.9]).astype(complex)
    with pytest.raises(DomainError):
        openness_witness(X, sym_poly([0.5, 0.9 + 0.2]), DomainSpec.disc(0, 1))
