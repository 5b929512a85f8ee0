import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_vectors, seeds
from speccartan.charpoly_map import char_coeffs, companion, sym_poly
from speccartan.domains import DomainSpec
from speccartan.errors import DomainError, PreconditionError
from speccartan.generators import ginibre, random_unitary, similarity_factor
from speccartan.matrix_core import direct_sum, jordan_block, matrix_exp
from speccartan.perturbation_bounds import bottleneck_distance
from speccartan.scenarios import qualifying_maps
from speccartan.selfmap_dynamics import (
    Composition,
    Conjugation,
    ExpShift,
    FunctionalCalculus,
    Identity,
    SecondOrderConjugation,
    SecondOrderPerturbation,
    Translation,
    apply,
    balanced_companion,
    check_diagram,
    classify_moduli,
    coeff_translate,
    derivative_deviation,
    domain_membership,
    entire_curve,
    fixed_set_dim_lower_bound,
    induced_G,
    iterate_G,
    make_entire_curve,
    numeric_jacobian_G,
    random_representative,
    selfmap_from_json,
    spectral_image,
    spectrum_preservation_check,
)

I2 = np.eye(2, dtype=complex)


# variants --------------------------------------------------------------------


def test_expshift_fixes_identity():
    assert np.array_equal(apply(ExpShift(), np.eye(3)), np.eye(3))


def test_conjugation_preserves_coefficients(rng):
    W = ginibre(4, rng)
    S = similarity_factor(4, rng, 10.0)
    assert np.allclose(char_coeffs(apply(Conjugation(S=S), W)), char_coeffs(W), atol=1e-10)


def test_translation_roundtrip(rng):
    W = ginibre(3, rng)
    lam = 0.4 + 2j
    psi = Composition(maps=(Translation(lam=-lam), Translation(lam=lam)))
    assert np.allclose(apply(psi, W), W, atol=1e-15)


def test_composition_order(rng):
    W = ginibre(3, rng)
    # the last map acts first
    psi = Composition(maps=(FunctionalCalculus.polynomial([0, 0, 1]), Translation(lam=1.0)))
    assert np.allclose(apply(psi, W), (W - np.eye(3)) @ (W - np.eye(3)))


@given(seeds())
def test_exp_series_matches_matrix_exp(seed):
    W = 4 * ginibre(4, np.random.default_rng(seed))
    got = apply(FunctionalCalculus.named_series("exp"), W)
    assert np.allclose(got, matrix_exp(W), rtol=1e-9, atol=1e-9 * np.abs(matrix_exp(W)).max())


def test_geometric_series_and_rational_agree(rng):
    W = 0.3 * ginibre(3, rng) / np.linalg.norm(ginibre(3, rng), 2)
    geo = apply(FunctionalCalculus.named_series("geometric"), W)
    rat = apply(FunctionalCalculus.rational([1.0], [1.0, -1.0]), W)
    assert np.allclose(geo, rat, atol=1e-11)
    with pytest.raises(DomainError):
        apply(FunctionalCalculus.named_series("geometric"), 2 * np.eye(2))


def test_minpoly_fixing_map(rng):
    A = direct_sum(jordan_block(2, 1.0), jordan_block(1, -1.0))
    psi = FunctionalCalculus.minpoly_fixing(A, 0.3)
    fix, der = derivative_deviation(psi, A)
    assert fix <= 1e-14 and der <= 1e-9
    z = rng.standard_normal() + 1j * rng.standard_normal()
    assert psi.scalar(z) == pytest.approx(z + 0.3 * ((z - 1) ** 2 * (z + 1)) ** 2)


def test_second_order_maps_fix_base_with_identity_derivative(rng):
    A = ginibre(3, rng)
    E = 0.1 * ginibre(3, rng)
    for psi in (SecondOrderPerturbation(A=A, E=E, mode="left"),
                SecondOrderPerturbation(A=A, E=E, mode="sandwich"),
                SecondOrderConjugation(A=A, E=E)):
        fix, der = derivative_deviation(psi, A)
        assert fix <= 1e-14 and der <= 1e-9


def test_codomain_is_checked():
    psi = Translation(lam=-2.0, codomain=DomainSpec.disc(0, 1))
    with pytest.raises(DomainError):
        apply(psi, np.zeros((2, 2)))


def test_domain_membership_examples():
    assert domain_membership(np.diag([0.5, 0.2j]), DomainSpec.disc(0, 1))
    assert not domain_membership(jordan_block(2), DomainSpec.complement_of([0]))
    assert not domain_membership(np.diag([1 + 1e-9]), DomainSpec.disc(0, 1))


@pytest.mark.parametrize("psi", [
    Identity(),
    FunctionalCalculus.polynomial([1, 2j, 0.5]),
    FunctionalCalculus.rational([0, 1], [2, -1], domain=DomainSpec.disc(0, 1)),
    FunctionalCalculus.named_series("exp"),
    FunctionalCalculus.minpoly_fixing(np.diag([1.0, 2.0]), 0.2),
    Conjugation(S=np.array([[1, 2], [0, 1]], dtype=complex)),
    Translation(lam=1 - 1j),
    ExpShift(),
    Composition(maps=(ExpShift(), Translation(lam=0.5))),
    SecondOrderConjugation(A=np.eye(2, dtype=complex), E=np.ones((2, 2), dtype=complex)),
])
def test_selfmap_json_roundtrip(psi):
    back = selfmap_from_json(psi.to_json())
    W = np.array([[0.1, 0.2j], [-0.3, 0.05]])
    assert np.allclose(apply(back, W), apply(psi, W))
    assert back.to_json() == psi.to_json()


# entire curve ----------------------------------------------------------------


def test_entire_curve_diagonal_is_constant():
    W = np.diag([1.0, 2j, -3.0])
    for zeta in (0.0, 1.0, 3 - 0.4j):
        assert np.allclose(entire_curve(W, zeta), W)


def test_entire_curve_nilpotent():
    f = make_entire_curve(jordan_block(2))
    for zeta in (0.0, 2.0, -1 + 0.3j):
        M = f(zeta)
        assert np.allclose(np.diag(M), 0) and np.allclose(char_coeffs(M), 0)


@given(seeds(), st.integers(2, 5))
def test_entire_curve_property(seed, n):
    rng = np.random.default_rng(seed)
    W = ginibre(n, rng)
    f = make_entire_curve(W)
    assert np.allclose(f(1.0), W, atol=1e-12)
    y = rng.uniform(-0.5, 0.5)
    zeta = complex(rng.uniform(-9, 9), y)
    assert np.max(np.abs(char_coeffs(f(zeta)) - char_coeffs(W))) <= 1e-8
    zeta = 10 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    assert np.max(np.abs(f.coefficients(zeta) - char_coeffs(W))) <= 1e-8


def test_extended_coefficients_match_double_on_real_axis(rng):
    f = make_entire_curve(ginibre(4, rng))
    for zeta in (0.0, 1.0, -7.5):
        assert np.allclose(f.coefficients(zeta), char_coeffs(f(zeta)), atol=1e-10)


def test_extended_coefficients_are_precision_stable(rng):
    W = ginibre(5, rng)
    f = make_entire_curve(W)
    zeta = 1 + 9.5j
    assert f.log10_condition(zeta) > 10
    a = f.coefficients(zeta)
    b = f.coefficients(zeta, dps=f.working_digits(zeta) + 40)
    assert np.max(np.abs(a - b)) <= 1e-12
    assert np.max(np.abs(a - char_coeffs(W))) <= 1e-8


# induced maps ----------------------------------------------------------------


@given(complex_vectors(2, 6))
def test_balanced_companion_is_exact_diagonal_similarity(z):
    C = companion(z)
    B = balanced_companion(z)
    # B = D^{-1} C D with D a diagonal of powers of two: mantissas are unchanged
    # and the real and imaginary parts of an entry shift by the same exponent
    for part in (np.real, np.imag):
        assert np.array_equal(np.frexp(part(B))[0], np.frexp(part(C))[0])
    both = (C.real != 0) & (C.imag != 0)
    shift_re = np.frexp(B.real)[1] - np.frexp(C.real)[1]
    shift_im = np.frexp(B.imag)[1] - np.frexp(C.imag)[1]
    assert np.array_equal(shift_re[both], shift_im[both])
    assert np.allclose(char_coeffs(B), char_coeffs(C), atol=1e-12)


def test_balancing_improves_induced_map_accuracy():
    # roots near 2: the plain companion has norm ~ 1e2
    roots = 2 + 0.3 * np.exp(2j * np.pi * np.arange(6) / 6)
    z = sym_poly(roots)
    exact = sym_poly(np.exp(roots - 1))
    plain = char_coeffs(apply(ExpShift(), companion(z)))
    scale = np.maximum(1, np.abs(exact))
    assert np.max(np.abs(induced_G(ExpShift(), z) - exact) / scale) <= np.max(np.abs(plain - exact) / scale)
    assert np.max(np.abs(induced_G(ExpShift(), z) - exact) / scale) <= 1e-9


@given(complex_vectors(2, 5))
def test_induced_by_conjugation_is_identity(z):
    S = np.eye(z.size) + 0.2 * np.triu(np.ones((z.size, z.size)), 1)
    assert np.allclose(induced_G(Conjugation(S=S), z), z, atol=1e-9 * (1 + np.abs(z).max() ** z.size))


@given(complex_vectors(2, 5))
def test_induced_by_translation_shifts_roots(roots):
    lam = 0.7 - 0.2j
    got = induced_G(Translation(lam=lam), sym_poly(roots))
    assert np.allclose(got, sym_poly(roots - lam), atol=1e-10)


@given(seeds())
def test_induced_by_expshift_maps_roots(seed):
    mu = np.random.default_rng(seed).standard_normal(3) + 1j * np.random.default_rng(seed + 1).standard_normal(3)
    assert np.allclose(induced_G(ExpShift(), sym_poly(mu)), sym_poly(np.exp(mu - 1)), atol=1e-8)


def test_spectral_image_matches_induced(rng):
    mu = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    h = FunctionalCalculus.polynomial([0.5, 1, 0.2j])
    assert np.allclose(spectral_image(h, sym_poly(mu)), induced_G(h, sym_poly(mu)), atol=1e-10)


def test_coeff_translate_examples():
    y = np.array([1.0 - 1j, 2.0, 0.5j])
    assert np.array_equal(coeff_translate(y, 0), y)
    assert np.allclose(coeff_translate([0, 0], 1.0), [2, 1])


@given(complex_vectors(2, 6), st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_coeff_translate_roundtrip(y, lam):
    back = coeff_translate(coeff_translate(y, lam), -lam)
    assert np.allclose(back, y, atol=1e-12 * (1 + abs(lam)) ** y.size * (1 + np.abs(y).max()))


@pytest.mark.parametrize("psi, tol", [
    (Conjugation(S=np.array([[2, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=complex)), 1e-10),
    (Translation(lam=0.3 + 1j), 1e-10),
    (ExpShift(), 1e-8),
])
def test_diagram_commutes(psi, tol, rng):
    W = ginibre(3, rng)
    assert check_diagram(psi, W, tol).holds


@given(seeds())
def test_representative_independence(seed):
    rng = np.random.default_rng(seed)
    z = char_coeffs(ginibre(4, rng))
    psi = FunctionalCalculus.polynomial([0.1, 1, 0.3])
    got = char_coeffs(apply(psi, random_representative(z, rng)))
    assert np.allclose(got, induced_G(psi, z), rtol=1e-7, atol=1e-7)


def test_numeric_jacobian_examples(rng):
    z = char_coeffs(ginibre(3, rng))
    S = similarity_factor(3, rng, 10.0)
    assert np.allclose(numeric_jacobian_G(Conjugation(S=S), z).matrix, np.eye(3), atol=1e-8)
    A = companion(z)
    for _, psi in qualifying_maps(A, rng, spectral_only=True):
        assert np.allclose(numeric_jacobian_G(psi, z).matrix, np.eye(3), atol=1e-6)


def test_translated_jacobian_is_similar(rng):
    z = sym_poly([0.2, -0.3j, 0.5])
    h = FunctionalCalculus.polynomial([0.1, 0.6, 0.2])
    lam = 0.4 - 0.2j
    psi_lam = Composition(maps=(Translation(lam=lam), h, Translation(lam=-lam)))
    J = numeric_jacobian_G(h, coeff_translate(z, lam)).matrix
    J_lam = numeric_jacobian_G(psi_lam, z).matrix
    assert bottleneck_distance(np.linalg.eigvals(J), np.linalg.eigvals(J_lam)) < 1e-6


# iteration -------------------------------------------------------------------


def test_conjugation_orbit_is_trivial(rng):
    z0 = sym_poly([0.1, 0.5j, -0.3])
    rep = iterate_G(Conjugation(S=random_unitary(3, rng)), z0, max_iter=5)
    assert rep.converged and len(rep.orbit) == 1 and rep.unimodular_count == 3


def test_rational_contraction():
    h = FunctionalCalculus.rational([0, 1], [2, -1], domain=DomainSpec.disc(0, 1))
    rep = iterate_G(h, sym_poly([0.5, -0.4j, 0.3 + 0.3j]))
    # w / (2 - w) has attracting fixed point 0 with multiplier 1/2
    assert rep.converged and np.allclose(rep.limit, 0, atol=1e-8)
    assert bottleneck_distance(np.array(rep.derivative_spectrum), [0.5, 0.25, 0.125]) < 1e-4
    assert rep.contracting_count == 3
    assert "orbit" in rep.to_json(verbose=True) and "orbit" not in rep.to_json()


def test_classify_moduli():
    assert classify_moduli([1.0, 1j, 0.5, 2.0]) == (2, 1, 1)


# fixed sets and preservation -------------------------------------------------


def test_fixed_set_identity():
    rep = fixed_set_dim_lower_bound(Identity(), np.diag([0.0, 0.0, 5.0]))
    assert rep.eig_one_count == 3 and rep.minpoly_degree == 2 and rep.theorem_holds


def test_fixed_set_case_b(rng):
    B = np.zeros((3, 3), dtype=complex)
    B[1, 2] = 1.0
    for _, psi in qualifying_maps(B, rng, spectral_only=True):
        rep = fixed_set_dim_lower_bound(psi, B)
        assert rep.minpoly_degree == 2 and rep.eig_one_count >= 2


def test_fixed_set_companion(rng):
    A = companion(sym_poly([1.0, -1.0, 2j]))
    for _, psi in qualifying_maps(A, rng, spectral_only=True):
        rep = fixed_set_dim_lower_bound(psi, A)
        assert rep.eig_one_count == 3 and rep.minpoly_degree == 3


def test_fixed_set_rejects_non_qualifying_map():
    with pytest.raises(PreconditionError):
        fixed_set_dim_lower_bound(Translation(lam=1.0), np.eye(2))


def test_preservation_examples(rng):
    S = similarity_factor(3, rng, 10.0)
    samples = [ginibre(3, rng) for _ in range(3)]
    rep = spectrum_preservation_check(Conjugation(S=S), samples, tol=1e-8, base=np.diag([1.0, 1.0, 2.0]))
    assert rep.preserving and rep.profiles_match
    both = Composition(maps=(Conjugation(S=S), Conjugation(S=np.linalg.inv(S))))
    assert spectrum_preservation_check(both, samples, tol=1e-8).preserving
    rep = spectrum_preservation_check(ExpShift(domain=DomainSpec.complement_of([0])), [2 * I2], tol=1e-8)
    assert not rep.preserving and rep.distances[0] == pytest.approx(abs(2 - np.e))
