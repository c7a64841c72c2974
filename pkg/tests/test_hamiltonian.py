import math

import numpy as np
import pytest

from squid_lindblad.errors import ParameterDomainError, RenormalizationError
from squid_lindblad.hamiltonian import (
    HamiltonianConfig,
    RenormalizationOrder,
    SinTermCoefficient,
    bogoliubov_shift,
    build_system_hamiltonian,
    cos_operator,
    lambda_first_order,
    lambda_second_order,
    renormalization,
    second_order_sin_hamiltonian_term,
    sin_operator,
    sin_term_coefficient,
    squeeze_term,
)
from squid_lindblad.operators import (
    build_ladder,
    build_xp,
    is_hermitian,
    parity_operator,
    quadrature_squares,
)
from squid_lindblad.params import DerivedScales


def test_lambda_first_order():
    assert lambda_first_order(0.0, 10.0, 1.0) == 0.0
    x = 2 * 10.0 * 1e-3
    assert lambda_first_order(1e-3, 10.0, 1.0) == pytest.approx(x / (1 + x))
    assert lambda_first_order(1e-3, math.inf, 1.0) == 1.0


def test_lambda_unit_independent():
    omega0 = 8.165e11
    si = lambda_first_order(1e-3 * omega0, 10 * omega0, omega0)
    assert si == pytest.approx(lambda_first_order(1e-3, 10.0, 1.0), rel=1e-12)


def test_lambda_second_order_reduces_at_high_cutoff():
    assert lambda_second_order(1e-3, 1e6, 1.0) == pytest.approx(
        lambda_first_order(1e-3, 1e6, 1.0), rel=1e-9
    )
    with pytest.raises(ParameterDomainError):
        lambda_second_order(-1.0, 10.0, 1.0)


def test_renormalization_orders(reference_scales):
    assert renormalization(reference_scales, RenormalizationOrder.NONE) == 0.0
    first = renormalization(reference_scales, RenormalizationOrder.FIRST)
    assert first == pytest.approx(lambda_first_order(1e-3, 10.0, 1.0), rel=1e-10)


def test_renormalization_overflow_raises(reference_scales):
    scales = reference_scales.with_cutoff(0.0)
    config = HamiltonianConfig(renormalization_order=RenormalizationOrder.FIRST)
    with pytest.raises(RenormalizationError):
        build_system_hamiltonian(scales, config, 8)


def test_bare_oscillator_is_diagonal(oscillator_scales):
    H = build_system_hamiltonian(oscillator_scales, HamiltonianConfig(), 10)
    np.testing.assert_allclose(H, np.diag(np.arange(10) + 0.5), atol=1e-13)


def test_squeeze_term_in_ladder_form():
    N, g = 10, 0.1
    a, ad = build_ladder(N)
    expected = 0.5j * g * (ad @ ad - a @ a)
    np.testing.assert_allclose(squeeze_term(g, N), expected, atol=1e-14)


def test_squeeze_included_only_with_damping(oscillator_scales):
    config = HamiltonianConfig(include_squeeze=True)
    bare = build_system_hamiltonian(oscillator_scales, config, 8)
    damped = build_system_hamiltonian(oscillator_scales.with_gamma(0.1), config, 8)
    np.testing.assert_allclose(damped - bare, squeeze_term(0.1, 8), atol=1e-14)


def test_reference_hamiltonian_hermitian(reference_scales):
    H = build_system_hamiltonian(
        reference_scales, HamiltonianConfig(flux_fraction=0.3), 20
    )
    assert is_hermitian(H)


def test_flux_reflection_symmetry(reference_scales):
    N = 16
    Pi = parity_operator(N)
    H = build_system_hamiltonian(
        reference_scales, HamiltonianConfig(flux_fraction=0.2), N
    )
    H_mirror = build_system_hamiltonian(
        reference_scales, HamiltonianConfig(flux_fraction=0.8), N
    )
    np.testing.assert_allclose(Pi @ H @ Pi, H_mirror, atol=1e-10)


def test_flux_periodicity(reference_scales):
    S = sin_operator(reference_scales, 0.3, 12)
    np.testing.assert_allclose(S, sin_operator(reference_scales, 1.3, 12), atol=1e-10)
    C = cos_operator(reference_scales, 0.3, 12)
    np.testing.assert_allclose(C, cos_operator(reference_scales, 1.3, 12), atol=1e-10)


def test_bogoliubov_shift():
    assert bogoliubov_shift(1.0, 0.6) == pytest.approx(0.8)
    assert bogoliubov_shift(2.0, 0.0) == 2.0
    with pytest.raises(ParameterDomainError):
        bogoliubov_shift(1.0, 1.5)
    with pytest.raises(ParameterDomainError):
        bogoliubov_shift(1.0, -0.1)


def test_sin_term_coefficients(reference_scales):
    printed = sin_term_coefficient(reference_scales, 1e-3, SinTermCoefficient.PRINTED)
    derived = sin_term_coefficient(reference_scales, 1e-3, SinTermCoefficient.DERIVED)
    assert printed == pytest.approx(reference_scales.xi * reference_scales.sin_scale)
    assert derived == pytest.approx(1e-3 * printed)


def test_second_order_sin_term_defaults_to_printed(reference_scales):
    N = 10
    X, _ = build_xp(N)
    S = sin_operator(reference_scales, 0.1, N)
    c = reference_scales.xi * reference_scales.sin_scale
    np.testing.assert_allclose(
        second_order_sin_hamiltonian_term(reference_scales, 0.1, N),
        0.5 * c * (X @ S + S @ X),
        atol=1e-13,
    )


@pytest.mark.parametrize("operator", [sin_operator, cos_operator])
def test_josephson_matrix_elements_converge_with_basis(shallow_scales, operator):
    block = 6
    coarse = operator(shallow_scales, 0.3, 20)[:block, :block]
    fine = operator(shallow_scales, 0.3, 30)[:block, :block]
    np.testing.assert_allclose(coarse, fine, atol=1e-8)


def test_double_well_ground_state_is_centred():
    scales = DerivedScales.dimensionless(nu_ratio=4.0, phase_scale=0.8)
    N = 30
    Pi = parity_operator(N)
    H = build_system_hamiltonian(scales, HamiltonianConfig(flux_fraction=0.5), N)
    np.testing.assert_allclose(Pi @ H @ Pi, H, atol=1e-12)

    energies, states = np.linalg.eigh(H)
    ground = states[:, 0]
    X, _ = build_xp(N)
    assert energies[1] - energies[0] > 1e-6
    assert abs(np.vdot(ground, X @ ground)) < 1e-8


def test_second_order_sin_term_parity(shallow_scales):
    N = 12
    Pi = parity_operator(N)
    even = second_order_sin_hamiltonian_term(shallow_scales, 0.0, N)
    assert np.abs(even).max() > 0
    np.testing.assert_allclose(Pi @ even @ Pi, even, atol=1e-12)
    # sin(k X + pi/2) = cos(k X) is even, so X S + S X turns odd
    odd = second_order_sin_hamiltonian_term(shallow_scales, 0.25, N)
    np.testing.assert_allclose(Pi @ odd @ Pi, -odd, atol=1e-12)


def test_first_order_shift_absorbs_bath_potential():
    g, xi, N = 1e-3, 0.1, 10
    scales = DerivedScales.dimensionless(nu_ratio=0.5, phase_scale=0.8, xi=xi)
    scales = scales.with_gamma(g)
    first = RenormalizationOrder.FIRST
    bare = build_system_hamiltonian(scales, HamiltonianConfig(), N)
    dressed = build_system_hamiltonian(
        scales, HamiltonianConfig(renormalization_order=first), N
    )
    lam = renormalization(scales, first)
    # lambda / (1 - lambda) = 2 g / xi, the bath's X^2 weight
    X2, _ = quadrature_squares(N)
    shift = (bare - dressed) / (1 - lam)
    np.testing.assert_allclose(shift, (g / xi) * X2, atol=1e-12)
