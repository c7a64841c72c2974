"""Independent numerical checks run by ``squid-lindblad verify``.

Each oracle compares a closed form or a solver against a second, independent
computation and reports whether the difference is inside its tolerance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from squid_lindblad.bch import truncation_error_slope
from squid_lindblad.config import (
    REFERENCE_CAPACITANCE,
    REFERENCE_INDUCTANCE,
    REFERENCE_JOSEPHSON_ENERGY,
)
from squid_lindblad.errors import NonUniqueSteadyStateError, SquidLindbladError
from squid_lindblad.hamiltonian import (
    HamiltonianConfig,
    RenormalizationOrder,
    build_system_hamiltonian,
    lambda_first_order,
)
from squid_lindblad.kernels import (
    KernelParams,
    dissipation_kernel,
    dissipation_kernel_quadrature,
    moment_identity_check,
    noise_kernel_quadrature,
    noise_kernel_T0,
)
from squid_lindblad.MasterEquations import (
    GeneratorKind,
    assemble_liouvillian,
    build_lindblad_first,
    verify_lindblad_consistency,
)
from squid_lindblad.observables import damped_oscillation_frequency
from squid_lindblad.operators import build_xp, quadrature_squares
from squid_lindblad.params import BathParams, DerivedScales, SquidParams, derive_scales
from squid_lindblad.SteadyState import evolve, steady_state
from squid_lindblad.util import (
    commutator_super,
    random_density_matrix,
    trace_distance,
    vec,
)

log = logging.getLogger(__name__)

FAULTS = ("p_sign",)
KERNEL_TAUS = (0.5, 1.0, 3.0)


@dataclass
class OracleResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def as_row(self) -> dict:
        return {
            "oracle": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "value": self.value,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


Oracle = Callable[[str], OracleResult]
ORACLES: dict[str, Oracle] = {}


def oracle(name: str):
    def register(func):
        ORACLES[name] = func
        return func

    return register


def reference_scales(xi: float = 0.1, gamma_ratio: float = 1e-3) -> DerivedScales:
    omega0 = 1.0 / math.sqrt(REFERENCE_CAPACITANCE * REFERENCE_INDUCTANCE)
    squid = SquidParams(
        REFERENCE_CAPACITANCE, REFERENCE_INDUCTANCE, REFERENCE_JOSEPHSON_ENERGY, 0.0
    )
    cutoff = math.inf if xi == 0 else omega0 / xi
    return derive_scales(squid, BathParams(gamma_ratio * omega0, cutoff))


def _reference_kernel_params() -> KernelParams:
    scales = reference_scales()
    return KernelParams(
        gamma=1e-3 * scales.omega0,
        cutoff=10 * scales.omega0,
        capacitance=REFERENCE_CAPACITANCE,
        omega0=scales.omega0,
    )


def _relative_errors(closed, numeric, p: KernelParams) -> list[float]:
    errors = []
    for x in KERNEL_TAUS:
        tau = x / p.cutoff
        exact = closed(tau, p)
        errors.append(abs(numeric(tau, p) - exact) / abs(exact))
    return errors


def _result(name, value, tolerance, detail="") -> OracleResult:
    return OracleResult(name, bool(value < tolerance), float(value), tolerance, detail)


@oracle("kernel_dissipation")
def _kernel_dissipation(fault: str = None) -> OracleResult:
    p = _reference_kernel_params()
    errors = _relative_errors(dissipation_kernel, dissipation_kernel_quadrature, p)
    return _result("kernel_dissipation", max(errors), 1e-6, "Omega tau = 0.5, 1, 3")


@oracle("kernel_noise")
def _kernel_noise(fault: str = None) -> OracleResult:
    p = _reference_kernel_params()
    errors = _relative_errors(noise_kernel_T0, noise_kernel_quadrature, p)
    return _result("kernel_noise", max(errors), 1e-6, "Omega tau = 0.5, 1, 3")


@oracle("kernel_low_temperature")
def _kernel_low_temperature(fault: str = None) -> OracleResult:
    p = _reference_kernel_params()
    tau = 1.0 / p.cutoff
    cold = noise_kernel_quadrature(tau, p, temperature=1e-3)
    zero = noise_kernel_quadrature(tau, p)
    return _result(
        "kernel_low_temperature", abs(cold - zero) / abs(zero), 1e-12, "T = 1 mK"
    )


@oracle("moment_identity")
def _moment_identity(fault: str = None) -> OracleResult:
    cutoff = 10 * reference_scales().omega0
    worst = 0.0
    for n in range(5):
        expected, value = moment_identity_check(n, cutoff)
        worst = max(worst, abs(value - expected) / expected)
    return _result("moment_identity", worst, 1e-9, "n = 0..4")


def _bch_slope(order: int, expected: float) -> OracleResult:
    scales = reference_scales()
    N = 12
    H = build_system_hamiltonian(scales, HamiltonianConfig(flux_fraction=0.3), N)
    X, _ = build_xp(N)
    slope = truncation_error_slope(H, X, order)
    return _result(
        f"bch_slope_order{order}",
        abs(slope - expected),
        0.1,
        f"slope {slope:.4f}, expected {expected:.1f}",
    )


@oracle("bch_slope_order1")
def _bch_slope_1(fault: str = None) -> OracleResult:
    return _bch_slope(1, 2.0)


@oracle("bch_slope_order2")
def _bch_slope_2(fault: str = None) -> OracleResult:
    return _bch_slope(2, 3.0)


@oracle("defect_fit_order1")
def _defect_fit_1(fault: str = None) -> OracleResult:
    scales = reference_scales()
    report = verify_lindblad_consistency(
        1, scales, 1e-3, 0.3, N=16, mutate_p_sign=fault == "p_sign"
    )
    c = report.coefficients["PP"]
    expected = report.expected["PP"]
    coefficient_error = abs(c - expected) / expected
    value = max(report.residual, coefficient_error)
    result = _result(
        "defect_fit_order1",
        value,
        1e-8,
        f"c = {c.real:.6e}, residual {report.residual:.2e}",
    )
    result.passed = result.passed and c.real > 0
    return result


@oracle("defect_fit_order2")
def _defect_fit_2(fault: str = None) -> OracleResult:
    scales = reference_scales()
    report = verify_lindblad_consistency(2, scales, 1e-3, 0.3, N=16)
    errors = [report.residual]
    for name in ("PP", "SS"):
        expected = report.expected[name]
        errors.append(abs(report.coefficients[name] - expected) / expected)
    errors.append(abs(report.coefficients["PS"]) / report.expected["PP"])
    detail = (
        f"residual {report.residual:.2e}; best sin coefficient "
        f"{report.best_coefficient:.4e} (derived {report.derived_coefficient:.4e}, "
        f"printed {report.printed_coefficient:.4e})"
    )
    return _result("defect_fit_order2", max(errors), 1e-8, detail)


@oracle("cross_solver")
def _cross_solver(fault: str = None) -> OracleResult:
    rng = np.random.default_rng(20240517)
    N = 8
    distances, trace_errors, negativities = [], [], []
    for _ in range(10):
        scales = DerivedScales.dimensionless(
            nu_ratio=rng.uniform(0.0, 2.0),
            phase_scale=rng.uniform(0.5, 1.5),
            xi=rng.uniform(0.0, 0.3),
        )
        gamma = rng.uniform(0.05, 0.3)
        flux = rng.uniform(0.0, 1.0)
        rho0 = random_density_matrix(N, rng)
        G = assemble_liouvillian(
            build_lindblad_first(scales, gamma, flux, N), GeneratorKind.LIND1
        )
        try:
            ss = steady_state(G, gap_threshold=1e-6)
        except NonUniqueSteadyStateError as exc:
            log.info("cross_solver skips a parameter set: %s", exc)
            continue

        traj = evolve(G, rho0, t_final=30.0 / ss.spectral_gap, n_records=2)
        distances.append(trace_distance(traj.final, ss.rho_ss))
        trace_errors.append(abs(np.trace(ss.rho_ss).real - 1.0))
        negativities.append(ss.negativity)

    if not distances:
        return OracleResult("cross_solver", False, math.nan, 1e-6, "no usable sets")
    result = _result(
        "cross_solver",
        max(distances),
        1e-6,
        f"{len(distances)} parameter sets, max trace error {max(trace_errors):.1e}, "
        f"max negativity {max(negativities):.1e}",
    )
    result.passed = (
        result.passed and max(trace_errors) < 1e-10 and max(negativities) <= 1e-8
    )
    return result


@oracle("squeeze_frequency_shift")
def _squeeze_frequency_shift(fault: str = None) -> OracleResult:
    g = 0.2
    N = 30
    scales = DerivedScales.dimensionless(nu_ratio=0.0, phase_scale=1.0)
    squeezed = assemble_liouvillian(build_lindblad_first(scales, g, 0.0, N))
    plain = assemble_liouvillian(
        build_lindblad_first(scales, g, 0.0, N, include_squeeze=False)
    )
    decay, omega = damped_oscillation_frequency(squeezed)
    _, omega_plain = damped_oscillation_frequency(plain)
    error = max(
        abs(omega - math.sqrt(1 - g**2)), abs(decay - g), abs(omega_plain - 1.0)
    )
    return _result(
        "squeeze_frequency_shift",
        error,
        1e-8,
        f"omega {omega:.10f} with squeeze, {omega_plain:.10f} without",
    )


@oracle("renormalization_absorption")
def _renormalization_absorption(fault: str = None) -> OracleResult:
    """The bath's i (g/xi) [X^2, .] term against the Hamiltonian shift that
    lambda_first_order puts into H, once 1/L is rescaled by 1 - lambda."""
    g, xi = 1e-3, 0.1
    N = 12

    scales = DerivedScales.dimensionless(nu_ratio=0.0, phase_scale=1.0, xi=xi)
    scales = scales.with_gamma(g)
    bare = build_system_hamiltonian(
        scales, HamiltonianConfig(include_squeeze=False), N
    )
    dressed = build_system_hamiltonian(
        scales,
        HamiltonianConfig(
            include_squeeze=False, renormalization_order=RenormalizationOrder.FIRST
        ),
        N,
    )
    lam = lambda_first_order(g, 1.0 / xi, 1.0)
    X2, _ = quadrature_squares(N)

    bath_term = 1j * (g / xi) * commutator_super(X2)
    shift = (-1j * commutator_super(dressed) + 1j * commutator_super(bare)) / (1 - lam)
    error = np.abs(shift - bath_term).max() / np.abs(bath_term).max()

    rng = np.random.default_rng(7)
    for _ in range(3):
        v = vec(random_density_matrix(N, rng))
        applied = np.linalg.norm(shift @ v - bath_term @ v)
        error = max(error, applied / np.linalg.norm(bath_term @ v))
    return _result("renormalization_absorption", error, 1e-10, f"lambda {lam:.6e}")


def run_oracles(names: list[str] = None, fault: str = None) -> list[OracleResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}, choose from {', '.join(FAULTS)}")
    names = list(ORACLES) if not names else names
    unknown = [n for n in names if n not in ORACLES]
    if unknown:
        raise ValueError(f"unknown oracles: {', '.join(unknown)}")

    results = []
    for name in names:
        try:
            result = ORACLES[name](fault)
        except (SquidLindbladError, np.linalg.LinAlgError, ValueError) as exc:
            log.error("oracle %s raised: %s", name, exc)
            result = OracleResult(name, False, math.nan, math.nan, f"raised: {exc}")
        log.info(
            "%s %s (%.3e < %.1e)",
            name,
            "passed" if result.passed else "FAILED",
            result.value,
            result.tolerance,
        )
        results.append(result)
    return results
