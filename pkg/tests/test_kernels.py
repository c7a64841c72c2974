import math

import numpy as np
import pytest

from squid_lindblad.errors import ParameterDomainError
from squid_lindblad.kernels import (
    KernelParams,
    dissipation_kernel,
    dissipation_kernel_quadrature,
    moment_identity_check,
    noise_kernel_quadrature,
    noise_kernel_T0,
    spectral_density,
)


@pytest.fixture
def kernel_params(reference_omega0):
    return KernelParams(
        gamma=1e-3 * reference_omega0,
        cutoff=10 * reference_omega0,
        capacitance=5e-15,
        omega0=reference_omega0,
    )


def test_spectral_density_ohmic_at_low_frequency(kernel_params):
    p = kernel_params
    w = 1e-4 * p.cutoff
    slope = 2 * p.capacitance * p.gamma / math.pi
    assert spectral_density(w, p) == pytest.approx(slope * w, rel=1e-7)
    assert spectral_density(0.0, p) == 0.0


def test_spectral_density_rejects_negative_frequency(kernel_params):
    with pytest.raises(ParameterDomainError):
        spectral_density(-1.0, kernel_params)


def test_spectral_density_vectorised(kernel_params):
    w = np.linspace(0, 5, 6) * kernel_params.cutoff
    J = spectral_density(w, kernel_params)
    assert J.shape == (6,)
    # Lorentz-Drude peak sits at the cutoff
    assert np.argmax(J) == 1


def test_dissipation_kernel_is_odd(kernel_params):
    tau = 0.7 / kernel_params.cutoff
    assert dissipation_kernel(-tau, kernel_params) == -dissipation_kernel(
        tau, kernel_params
    )
    assert dissipation_kernel(0.0, kernel_params) == 0.0


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_dissipation_kernel_quadrature(kernel_params, x):
    tau = x / kernel_params.cutoff
    exact = dissipation_kernel(tau, kernel_params)
    assert dissipation_kernel_quadrature(tau, kernel_params) == pytest.approx(
        exact, rel=1e-6
    )


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_noise_kernel_quadrature(kernel_params, x):
    tau = x / kernel_params.cutoff
    exact = noise_kernel_T0(tau, kernel_params)
    assert noise_kernel_quadrature(tau, kernel_params) == pytest.approx(
        exact, rel=1e-6
    )


def test_noise_kernel_low_temperature_limit(kernel_params):
    tau = 1.0 / kernel_params.cutoff
    cold = noise_kernel_quadrature(tau, kernel_params, temperature=1e-3)
    assert cold == pytest.approx(noise_kernel_quadrature(tau, kernel_params), rel=1e-12)


def test_noise_kernel_grows_with_temperature(kernel_params):
    tau = 1.0 / kernel_params.cutoff
    hot = noise_kernel_quadrature(tau, kernel_params, temperature=10.0)
    assert hot > noise_kernel_quadrature(tau, kernel_params)
    with pytest.raises(ParameterDomainError):
        noise_kernel_quadrature(tau, kernel_params, temperature=-1.0)


@pytest.mark.parametrize("n", range(5))
def test_moment_identity(n):
    expected, value = moment_identity_check(n, 8.165e12)
    assert expected == math.factorial(n)
    assert value == pytest.approx(expected, rel=1e-9)


def test_moment_identity_limits():
    with pytest.raises(ParameterDomainError):
        moment_identity_check(7, 1.0)
    with pytest.raises(ParameterDomainError):
        moment_identity_check(2, 0.0)


def test_kernel_params_validation():
    with pytest.raises(ParameterDomainError):
        KernelParams(gamma=-1.0, cutoff=1.0, capacitance=1.0, omega0=1.0)
    with pytest.raises(ParameterDomainError):
        KernelParams(gamma=1.0, cutoff=0.0, capacitance=1.0, omega0=1.0)
