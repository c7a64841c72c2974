"""SQUID Hamiltonian in the translated (external flux) basis, in units of
hbar*omega0:

    H = 1/2 P^2 + 1/2 (1 - lambda) X^2 - (nu/omega0) cos(k X + 2 pi phi_x)

with k = sqrt(beta omega0 / nu). The basis is fixed by the bare omega0; the
inductance renormalization only rescales the X^2 coefficient.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from squid_lindblad.errors import ParameterDomainError, RenormalizationError
from squid_lindblad.operators import (
    OperatorMatrix,
    build_xp,
    hermitian_function,
    quadrature_squares,
)
from squid_lindblad.params import DerivedScales


class RenormalizationOrder(enum.Enum):
    NONE = "none"
    FIRST = "first"
    SECOND = "second"


class SinTermCoefficient(enum.Enum):
    # (gamma/omega0) xi sqrt(beta nu/omega0), the weight the L2 dissipator implies
    DERIVED = "derived"
    # xi sqrt(beta nu/omega0) = sqrt(beta xi nu/Omega), with no damping factor
    PRINTED = "printed"


@dataclass(frozen=True)
class HamiltonianConfig:
    flux_fraction: float = 0.0
    renormalization_order: RenormalizationOrder = RenormalizationOrder.NONE
    include_squeeze: bool = True
    include_second_order_sin_term: bool = False
    sin_term: SinTermCoefficient = SinTermCoefficient.DERIVED


def _check_rates(gamma: float, cutoff: float, omega0: float) -> None:
    if gamma < 0:
        raise ParameterDomainError("gamma", f"must be non-negative, got {gamma!r}")
    if not cutoff > 0:
        raise ParameterDomainError("cutoff", f"must be positive, got {cutoff!r}")
    if not omega0 > 0:
        raise ParameterDomainError("omega0", f"must be positive, got {omega0!r}")


def _shift(x: float) -> float:
    if math.isinf(x):
        return 1.0
    return x / (1.0 + x)


def lambda_first_order(gamma: float, cutoff: float, omega0: float) -> float:
    """lambda = x / (1 + x) with x = 2 Omega gamma / omega0^2. Any
    consistent frequency unit may be used."""
    _check_rates(gamma, cutoff, omega0)
    if gamma == 0:
        return 0.0
    return _shift(2 * cutoff * gamma / omega0**2)


def lambda_second_order(gamma: float, cutoff: float, omega0: float) -> float:
    _check_rates(gamma, cutoff, omega0)
    if gamma == 0:
        return 0.0
    return _shift(2 * gamma * cutoff * (1 - omega0**2 / cutoff**2) / omega0**2)


def renormalization(scales: DerivedScales, order: RenormalizationOrder) -> float:
    match order:
        case RenormalizationOrder.NONE:
            return 0.0
        case RenormalizationOrder.FIRST:
            return lambda_first_order(scales.gamma_ratio, scales.cutoff_ratio, 1.0)
        case RenormalizationOrder.SECOND:
            return lambda_second_order(scales.gamma_ratio, scales.cutoff_ratio, 1.0)
    raise ValueError(f"unknown renormalization order {order!r}")


def josephson_argument_phase(flux_fraction: float) -> float:
    return 2 * math.pi * flux_fraction


def sin_operator(
    scales: DerivedScales, flux_fraction: float, N: int
) -> OperatorMatrix:
    """sin(k X + 2 pi phi_x)"""
    X, _ = build_xp(N)
    return hermitian_function(
        scales.phase_scale * X, np.sin, josephson_argument_phase(flux_fraction)
    )


def cos_operator(
    scales: DerivedScales, flux_fraction: float, N: int
) -> OperatorMatrix:
    X, _ = build_xp(N)
    return hermitian_function(
        scales.phase_scale * X, np.cos, josephson_argument_phase(flux_fraction)
    )


def squeeze_term(gamma_ratio: float, N: int) -> OperatorMatrix:
    """(gamma / 2 omega0)(XP + PX) = (i gamma / 2 omega0)(a^H^2 - a^2)"""
    X, P = build_xp(N)
    return 0.5 * gamma_ratio * (X @ P + P @ X)


def bogoliubov_shift(omega: float, gamma: float) -> float:
    if gamma < 0:
        raise ParameterDomainError("gamma", f"must be non-negative, got {gamma!r}")
    if gamma > omega:
        raise ParameterDomainError(
            "gamma", f"overdamped: gamma = {gamma!r} exceeds omega = {omega!r}"
        )
    return omega * math.sqrt(1.0 - (gamma / omega) ** 2)


def sin_term_coefficient(
    scales: DerivedScales, gamma_ratio: float, mode: SinTermCoefficient
) -> float:
    printed = scales.xi * scales.sin_scale
    match mode:
        case SinTermCoefficient.PRINTED:
            return printed
        case SinTermCoefficient.DERIVED:
            return gamma_ratio * printed
    raise ValueError(f"unknown sin term coefficient {mode!r}")


def second_order_sin_hamiltonian_term(
    scales: DerivedScales,
    flux_fraction: float,
    N: int,
    coefficient: float = None,
) -> OperatorMatrix:
    """coefficient * 1/2 (X S + S X) with S the sin operator. Without an
    explicit coefficient the undamped weight xi * sqrt(beta nu / omega0) is used."""
    if coefficient is None:
        coefficient = sin_term_coefficient(
            scales, scales.gamma_ratio, SinTermCoefficient.PRINTED
        )
    X, _ = build_xp(N)
    S = sin_operator(scales, flux_fraction, N)
    return 0.5 * coefficient * (X @ S + S @ X)


def build_system_hamiltonian(
    scales: DerivedScales, config: HamiltonianConfig, N: int
) -> OperatorMatrix:
    lam = renormalization(scales, config.renormalization_order)
    if lam >= 1:
        raise RenormalizationError(lam)

    X2, P2 = quadrature_squares(N)
    H = 0.5 * P2 + 0.5 * (1.0 - lam) * X2
    if scales.nu_ratio != 0:
        H = H - scales.nu_ratio * cos_operator(scales, config.flux_fraction, N)

    if config.include_squeeze and scales.gamma_ratio != 0:
        H = H + squeeze_term(scales.gamma_ratio, N)

    if config.include_second_order_sin_term:
        coefficient = sin_term_coefficient(
            scales, scales.gamma_ratio, config.sin_term
        )
        H = H + second_order_sin_hamiltonian_term(
            scales, config.flux_fraction, N, coefficient
        )

    return 0.5 * (H + H.conj().T)
