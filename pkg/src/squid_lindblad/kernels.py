"""Ohmic bath with a Lorentz-Drude cutoff: spectral density, the dissipation
and zero-temperature noise kernels, and quadrature oracles for them.

All functions here work in SI units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants, integrate

from squid_lindblad.errors import ParameterDomainError
from squid_lindblad.params import CODATA

QUAD_EPSREL = 1e-12
QUAD_EPSABS = 1e-15
# explicit frequency cutoff of the split quadrature, in units of Omega
QUAD_SPLIT_LIMIT = 100.0
MAX_MOMENT = 6


@dataclass(frozen=True)
class KernelParams:
    gamma: float
    cutoff: float
    capacitance: float
    omega0: float
    hbar: float = CODATA.hbar

    def __post_init__(self):
        if self.gamma < 0:
            raise ParameterDomainError("gamma", "must be non-negative")
        for name in ("cutoff", "capacitance", "omega0"):
            if not getattr(self, name) > 0:
                raise ParameterDomainError(name, "must be positive")


def spectral_density(omega, p: KernelParams):
    """J(w) = (2 C gamma / pi) w Omega^2 / (Omega^2 + w^2)"""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ParameterDomainError("omega", "spectral density needs omega >= 0")
    scale = 2 * p.capacitance * p.gamma / math.pi
    J = scale * w * p.cutoff**2 / (p.cutoff**2 + w**2)
    return J if J.ndim else float(J)


def dissipation_kernel(tau, p: KernelParams):
    """D(-tau) = 2 C gamma hbar Omega^2 exp(-Omega |tau|) sgn(tau)"""
    t = np.asarray(tau, dtype=float)
    peak = 2 * p.capacitance * p.gamma * p.hbar * p.cutoff**2
    D = peak * np.exp(-p.cutoff * np.abs(t)) * np.sign(t)
    return D if D.ndim else float(D)


def noise_kernel_T0(tau, p: KernelParams):
    """D1(-tau) = C hbar gamma Omega omega0 exp(-Omega |tau|)"""
    t = np.asarray(tau, dtype=float)
    peak = p.capacitance * p.hbar * p.gamma * p.cutoff * p.omega0
    D1 = peak * np.exp(-p.cutoff * np.abs(t))
    return D1 if D1.ndim else float(D1)


def _fourier_integral(f, w: float, weight: str) -> float:
    """int_0^inf f(u) sin(w u) du (weight "sin") or the cos analogue.

    Up to u = QUAD_SPLIT_LIMIT the range is split at the zeros of the
    oscillating factor and integrated adaptively; the tail goes to QUADPACK's
    Fourier integrator.
    """
    if w == 0:
        if weight == "sin":
            return 0.0
        return integrate.quad(f, 0, np.inf, epsrel=QUAD_EPSREL)[0]

    osc = np.sin if weight == "sin" else np.cos
    offset = 0.0 if weight == "sin" else 0.5
    half_period = math.pi / w
    m_max = int(QUAD_SPLIT_LIMIT / half_period - offset)
    nodes = [0.0] + [(m + offset) * half_period for m in range(1, m_max + 1)]
    if nodes[-1] < QUAD_SPLIT_LIMIT:
        nodes.append(QUAD_SPLIT_LIMIT)
    upper = nodes[-1]

    body = sum(
        integrate.quad(
            lambda u: f(u) * osc(w * u),
            a,
            b,
            epsrel=QUAD_EPSREL,
            epsabs=QUAD_EPSABS,
        )[0]
        for a, b in zip(nodes[:-1], nodes[1:])
    )
    tail = integrate.quad(
        f, upper, np.inf, weight=weight, wvar=w, epsabs=QUAD_EPSABS, limlst=200
    )[0]
    return body + tail


def dissipation_kernel_quadrature(tau: float, p: KernelParams) -> float:
    """2 hbar int_0^inf J(w) sin(w tau) dw, integrated in u = w / Omega."""
    x = p.cutoff * abs(tau)
    integral = _fourier_integral(lambda u: u / (1 + u * u), x, "sin")
    prefactor = 2 * p.hbar * (2 * p.capacitance * p.gamma / math.pi) * p.cutoff**2
    return float(np.sign(tau)) * prefactor * integral


def noise_kernel_quadrature(
    tau: float, p: KernelParams, temperature: float = 0.0
) -> float:
    """2 hbar (omega0/2) coth(hbar omega0 / 2 kT) int_0^inf J(w)/w cos(w tau) dw.

    The coth factor goes to 1 as T -> 0; finite temperature is only used to
    check that limit.
    """
    if temperature < 0:
        raise ParameterDomainError("temperature", "must be non-negative")
    if temperature == 0:
        thermal = 1.0
    else:
        x_th = p.hbar * p.omega0 / (2 * constants.k * temperature)
        thermal = 1.0 / math.tanh(x_th)

    x = p.cutoff * abs(tau)
    integral = _fourier_integral(lambda u: 1 / (1 + u * u), x, "cos")
    # J(w)/w = (2 C gamma / pi) / (1 + u^2); dw = Omega du
    density = 2 * p.capacitance * p.gamma / math.pi
    prefactor = 2 * p.hbar * 0.5 * p.omega0 * thermal * density * p.cutoff
    return prefactor * integral


def moment_identity_check(n: int, cutoff: float) -> tuple[int, float]:
    """Omega^(n+1) int_0^inf tau^n exp(-Omega tau) dtau, which should be n!"""
    if not 0 <= n <= MAX_MOMENT:
        raise ParameterDomainError("n", f"moment order must lie in 0..{MAX_MOMENT}")
    if not cutoff > 0:
        raise ParameterDomainError("cutoff", "must be positive")

    # exp(-60) is far below the requested tolerance
    upper = (60.0 + 4 * n) / cutoff
    value = integrate.quad(
        lambda tau: cutoff ** (n + 1) * tau**n * math.exp(-cutoff * tau),
        0,
        upper,
        epsrel=1e-12,
        epsabs=0,
        points=[n / cutoff] if n else None,
        limit=200,
    )[0]
    return math.factorial(n), value
