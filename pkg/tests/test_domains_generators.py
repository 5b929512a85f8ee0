import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from speccartan.domains import DomainSpec
from speccartan.generators import KINDS, generate_matrix, random_jordan_structure, similarity_factor
from speccartan.matrix_core import direct_sum, jordan_block, min_poly_degree


# domains ---------------------------------------------------------------------


@pytest.mark.parametrize("omega, inside, outside", [
    (DomainSpec.disc(1j, 2.0), 1j + 1.9, 1j + 2.1),
    (DomainSpec.halfplane(1.0, 0.0), -0.1, 0.1),
    (DomainSpec.annulus(0, 0.5, 1.0), 0.75, 0.25),
    (DomainSpec.complement_of([0.0, 1.0]), 0.5, 1.0),
])
def test_membership(omega, inside, outside):
    assert omega.contains(inside) and not omega.contains(outside)
    assert omega.boundary_distance(inside) > 0 >= omega.boundary_distance(outside)


def test_whole_plane():
    omega = DomainSpec.whole_plane()
    assert omega.contains(1e300) and omega.complement_cardinality_class == {"class": "empty"}


def test_complement_cardinality():
    omega = DomainSpec.complement_of(range(6))
    assert omega.complement_cardinality_class == {"class": "finite", "k": 6}
    assert omega.complement_at_least(3) and not omega.complement_at_least(4)
    assert DomainSpec.disc().complement_at_least(100)


@pytest.mark.parametrize("omega", [
    DomainSpec.disc(0.5 - 1j, 3.0), DomainSpec.halfplane(1j, 2.0), DomainSpec.annulus(1, 0.1, 2.0),
    DomainSpec.complement_of([0, 2j]), DomainSpec.whole_plane(),
])
def test_domain_json_roundtrip(omega):
    assert DomainSpec.from_json(omega.to_json()) == omega


def test_invalid_domains():
    with pytest.raises(ValueError):
        DomainSpec.disc(0, -1)
    with pytest.raises(ValueError):
        DomainSpec.annulus(0, 2, 1)
    with pytest.raises(ValueError):
        DomainSpec("square", {})


# generators ------------------------------------------------------------------


def test_nilpotent_jordan_before_transport():
    M = generate_matrix("nilpotent-jordan", 3, seed=1, partition=(2, 1), transport=False)
    assert np.array_equal(M, direct_sum(jordan_block(2), jordan_block(1)))


@pytest.mark.parametrize("kind", KINDS)
def test_generate_is_deterministic(kind):
    assert np.array_equal(generate_matrix(kind, 4, seed=99), generate_matrix(kind, 4, seed=99))


@given(seeds(), st.integers(2, 6))
def test_non_derogatory_has_full_minpoly(seed, n):
    assert min_poly_degree(generate_matrix("non-derogatory", n, seed=seed)).degree == n


@given(seeds(), st.floats(1.0, 1e3))
def test_similarity_factor_condition_cap(seed, cap):
    S = similarity_factor(5, np.random.default_rng(seed), cap)
    assert np.linalg.cond(S) <= cap * (1 + 1e-9)


@given(seeds(), st.integers(2, 6))
def test_random_jordan_structure_is_consistent(seed, n):
    js = random_jordan_structure(n, np.random.default_rng(seed))
    assert sum(sum(sizes) for _, sizes in js.blocks) == n
    assert js.minpoly_degree == sum(max(sizes) for _, sizes in js.blocks)
