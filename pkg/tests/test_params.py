import math

import pytest

from squid_lindblad import configkeys as keys
from squid_lindblad.config import SimConfig
from squid_lindblad.errors import ParameterDomainError
from squid_lindblad.params import (
    CODATA,
    BathParams,
    DerivedScales,
    SquidParams,
    derive_scales,
    validate_params,
)


def test_flux_quantum_matches_hbar_over_e():
    expected = math.pi * CODATA.hbar / CODATA.electron_charge
    assert CODATA.flux_quantum == pytest.approx(expected, rel=1e-12)


def test_reference_scales(reference_scales):
    assert reference_scales.omega0 == pytest.approx(8.165e11, rel=1e-3)
    assert reference_scales.xi == pytest.approx(0.1, rel=1e-12)
    assert reference_scales.critical_current == pytest.approx(3.04e-6, rel=1e-2)
    assert reference_scales.beta == pytest.approx(2.77, abs=0.01)
    assert reference_scales.nu_ratio == pytest.approx(11.6, abs=0.05)
    assert reference_scales.gamma_ratio == pytest.approx(1e-3, rel=1e-12)


def test_omega0_consistent_with_circuit(reference_squid, reference_scales):
    circuit = reference_squid.inductance * reference_squid.capacitance
    product = reference_scales.omega0**2 * circuit
    assert product == pytest.approx(1.0, rel=1e-12)


def test_beta_two_ways(reference_squid, reference_scales):
    from_current = (
        2 * math.pi * reference_squid.inductance * reference_scales.critical_current
    ) / CODATA.flux_quantum
    critical_current = (
        2 * math.pi * reference_squid.josephson_energy / CODATA.flux_quantum
    )
    direct = (
        2 * math.pi * reference_squid.inductance * critical_current
    ) / CODATA.flux_quantum
    assert from_current == pytest.approx(direct, rel=1e-12)
    assert reference_scales.beta == pytest.approx(direct, rel=1e-12)


def test_phase_and_sin_scales(reference_scales):
    k = reference_scales.phase_scale
    assert k == pytest.approx(0.489, abs=2e-3)
    beta = reference_scales.beta
    assert k**2 * reference_scales.nu_ratio == pytest.approx(beta, rel=1e-10)
    expected = math.sqrt(reference_scales.beta * reference_scales.nu_ratio)
    assert reference_scales.sin_scale == pytest.approx(expected, rel=1e-10)


def test_infinite_cutoff_gives_zero_xi(reference_squid, reference_omega0):
    scales = derive_scales(reference_squid, BathParams(1e-3 * reference_omega0))
    assert scales.xi == 0.0
    assert math.isinf(scales.cutoff_ratio)


def test_derive_scales_names_bad_field(reference_bath):
    squid = SquidParams(-1e-15, 3e-10, 1e-21)
    with pytest.raises(ParameterDomainError) as excinfo:
        derive_scales(squid, reference_bath)
    assert excinfo.value.field == keys.CAPACITANCE

    squid = SquidParams(5e-15, 3e-10, 0.0)
    with pytest.raises(ParameterDomainError) as excinfo:
        derive_scales(squid, reference_bath)
    assert excinfo.value.field == keys.JOSEPHSON_ENERGY


def test_derive_scales_rejects_zero_cutoff(reference_squid):
    with pytest.raises(ParameterDomainError) as excinfo:
        derive_scales(reference_squid, BathParams(1.0, cutoff_frequency=0.0))
    assert excinfo.value.field == keys.CUTOFF_RATIO


def test_flux_fraction_round_trip():
    squid = SquidParams.from_flux_fraction(5e-15, 3e-10, 1e-21, 0.25)
    assert squid.flux_fraction() == pytest.approx(0.25, rel=1e-14)


def test_dimensionless_scales():
    scales = DerivedScales.dimensionless(nu_ratio=2.0, phase_scale=0.5, xi=0.2)
    assert scales.beta == pytest.approx(0.5)
    assert scales.cutoff_ratio == pytest.approx(5.0)
    assert math.isnan(scales.critical_current)
    assert scales.with_cutoff(0.0).xi == 0.0
    assert scales.with_gamma(0.1).gamma_ratio == 0.1


def test_validate_defaults_clean(reference_squid, reference_bath):
    report = validate_params(reference_squid, reference_bath, SimConfig())
    assert report.valid
    assert len(report) == 0


def test_validate_temperature(reference_squid, reference_omega0):
    omega0 = reference_omega0
    bath = BathParams(1e-3 * omega0, 10 * omega0, temperature=4.0)
    report = validate_params(reference_squid, bath)
    assert not report.valid
    (issue,) = report.errors
    assert issue.key == keys.TEMPERATURE
    assert issue.message == "only T=0 supported"


def test_validate_zero_damping_warns(reference_squid, reference_omega0):
    report = validate_params(reference_squid, BathParams(0.0, 10 * reference_omega0))
    assert report.valid
    (issue,) = report.warnings
    assert issue.message == "Liouvillian kernel degenerate; steady state not unique"


def test_validate_sim_config(reference_squid, reference_bath):
    report = validate_params(
        reference_squid, reference_bath, SimConfig(basis_size=1, zeta=1.0)
    )
    assert {i.key for i in report.errors} == {keys.BASIS_SIZE, keys.ZETA}


def test_validate_renormalization_without_cutoff(reference_squid, reference_omega0):
    bath = BathParams(1e-3 * reference_omega0)
    report = validate_params(reference_squid, bath, SimConfig(renormalize=True))
    assert [i.key for i in report.errors] == [keys.RENORMALIZE]
