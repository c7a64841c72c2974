"""Circuit and bath parameters and the dimensionless scales derived from them.

Every other module works in units where time is measured in 1/omega0 and
energy in hbar*omega0, with the flux and charge operators rescaled to

    X = sqrt(C omega0 / hbar) Phi,    P = Q / sqrt(C hbar omega0)

so that [X, P] = i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from scipy import constants

from squid_lindblad import configkeys as keys
from squid_lindblad.errors import ParameterDomainError

if TYPE_CHECKING:
    from squid_lindblad.config import SimConfig


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = constants.hbar
    electron_charge: float = constants.e
    flux_quantum: float = constants.h / (2 * constants.e)


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class SquidParams:
    capacitance: float
    inductance: float
    josephson_energy: float
    external_flux: float = 0.0

    @classmethod
    def from_flux_fraction(
        cls,
        capacitance: float,
        inductance: float,
        josephson_energy: float,
        flux_fraction: float,
        const: PhysicalConstants = CODATA,
    ) -> SquidParams:
        return cls(
            capacitance=capacitance,
            inductance=inductance,
            josephson_energy=josephson_energy,
            external_flux=flux_fraction * const.flux_quantum,
        )

    def flux_fraction(self, const: PhysicalConstants = CODATA) -> float:
        return self.external_flux / const.flux_quantum


@dataclass(frozen=True)
class BathParams:
    damping_rate: float
    cutoff_frequency: float = math.inf
    temperature: float = 0.0


@dataclass(frozen=True)
class DerivedScales:
    omega0: float
    xi: float
    beta: float
    nu_ratio: float
    critical_current: float
    gamma_ratio: float = 0.0
    # sqrt(beta omega0 / nu): multiplies X inside the Josephson cosine
    phase_scale: float = 1.0
    # sqrt(hbar / (C omega0)) in Wb, the flux carried by X = 1
    flux_unit: float = math.nan
    inductance: float = math.nan
    const: PhysicalConstants = field(default=CODATA, repr=False)

    @property
    def sin_scale(self) -> float:
        """sqrt(beta nu / omega0), the weight of the sin operator in the
        second order flux series."""
        return self.beta / self.phase_scale

    @property
    def cutoff_ratio(self) -> float:
        return math.inf if self.xi == 0 else 1.0 / self.xi

    def with_cutoff(self, xi: float) -> DerivedScales:
        return replace(self, xi=xi)

    def with_gamma(self, gamma_ratio: float) -> DerivedScales:
        return replace(self, gamma_ratio=gamma_ratio)

    @classmethod
    def dimensionless(
        cls,
        nu_ratio: float,
        phase_scale: float,
        xi: float = 0.0,
        gamma_ratio: float = 0.0,
    ) -> DerivedScales:
        """Scales without an SI circuit behind them, for model studies such
        as the pure oscillator (nu_ratio = 0). SI-only fields are nan."""
        return cls(
            omega0=1.0,
            xi=xi,
            beta=phase_scale**2 * nu_ratio,
            nu_ratio=nu_ratio,
            critical_current=math.nan,
            gamma_ratio=gamma_ratio,
            phase_scale=phase_scale,
        )


def _require_positive(name: str, value: float) -> None:
    if not value > 0 or math.isnan(value):
        raise ParameterDomainError(name, f"must be positive, got {value!r}")


def derive_scales(
    squid: SquidParams, bath: BathParams, const: PhysicalConstants = CODATA
) -> DerivedScales:
    _require_positive(keys.CAPACITANCE, squid.capacitance)
    _require_positive(keys.INDUCTANCE, squid.inductance)
    _require_positive(keys.JOSEPHSON_ENERGY, squid.josephson_energy)
    _require_positive(keys.CUTOFF_RATIO, bath.cutoff_frequency)
    if bath.damping_rate < 0:
        raise ParameterDomainError(
            keys.GAMMA, f"must be non-negative, got {bath.damping_rate!r}"
        )

    C, L = squid.capacitance, squid.inductance
    omega0 = 1.0 / math.sqrt(L * C)
    nu = squid.josephson_energy / const.hbar
    critical_current = 2 * math.pi * squid.josephson_energy / const.flux_quantum
    beta = 2 * math.pi * L * critical_current / const.flux_quantum
    flux_unit = math.sqrt(const.hbar / (C * omega0))

    return DerivedScales(
        omega0=omega0,
        xi=omega0 / bath.cutoff_frequency,
        beta=beta,
        nu_ratio=nu / omega0,
        critical_current=critical_current,
        gamma_ratio=bath.damping_rate / omega0,
        phase_scale=2 * math.pi * flux_unit / const.flux_quantum,
        flux_unit=flux_unit,
        inductance=L,
        const=const,
    )


@dataclass(frozen=True)
class Issue:
    key: str
    message: str
    severity: str = "error"


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def valid(self) -> bool:
        return not self.errors

    def add(self, key: str, message: str, severity: str = "error") -> None:
        self.issues.append(Issue(key, message, severity))

    def __len__(self) -> int:
        return len(self.issues)

    def __iter__(self):
        return iter(self.issues)


def validate_params(
    squid: SquidParams, bath: BathParams, sim_config: SimConfig | None = None
) -> ValidationReport:
    report = ValidationReport()

    for key, value in (
        (keys.CAPACITANCE, squid.capacitance),
        (keys.INDUCTANCE, squid.inductance),
        (keys.JOSEPHSON_ENERGY, squid.josephson_energy),
    ):
        if not value > 0:
            report.add(key, f"must be positive, got {value!r}")

    if not math.isfinite(squid.external_flux):
        report.add(keys.FLUX_FRACTION, "external flux must be finite")

    if not bath.cutoff_frequency > 0:
        report.add(keys.CUTOFF_RATIO, "cutoff frequency must be positive")

    if bath.temperature != 0:
        report.add(keys.TEMPERATURE, "only T=0 supported")

    if bath.damping_rate < 0:
        report.add(keys.GAMMA, "damping rate must be non-negative")
    elif bath.damping_rate == 0:
        report.add(
            keys.GAMMA,
            "Liouvillian kernel degenerate; steady state not unique",
            severity="warning",
        )

    if not report.valid:
        return report

    scales = derive_scales(squid, bath)
    if scales.gamma_ratio > 1:
        report.add(
            keys.GAMMA,
            "overdamped (gamma > omega0); frequency shift formula not valid",
            severity="warning",
        )

    if sim_config is None:
        return report

    if sim_config.basis_size < 2:
        report.add(keys.BASIS_SIZE, "basis size must be at least 2")

    zeta = sim_config.zeta
    if zeta is not None and not 0 < zeta < 1:
        report.add(keys.ZETA, "zeta must lie strictly between 0 and 1")

    if sim_config.renormalize and scales.gamma_ratio > 0:
        # imported here, hamiltonian depends on this module
        from squid_lindblad.hamiltonian import lambda_second_order

        lam = lambda_second_order(scales.gamma_ratio, scales.cutoff_ratio, 1.0)
        if lam >= 1:
            report.add(
                keys.RENORMALIZE,
                "renormalization exceeds bare inductance at this cutoff",
            )

    return report
