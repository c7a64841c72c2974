"""Series expansion of the Heisenberg-picture flux operator

    X(-tau) = exp(-i H tau) X exp(i H tau) = sum_n A_n tau^n,
    A_n = (1/n!) [-iH, [-iH, ... [-iH, X]]]

and the weighted sums sum_n n! xi^n A_n that enter the dissipator once the
exponential bath memory has been integrated out. H is in units of hbar*omega0
and tau in units of 1/omega0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from squid_lindblad.errors import UnsupportedOrderError
from squid_lindblad.hamiltonian import sin_operator
from squid_lindblad.operators import OperatorMatrix, build_xp, commutator
from squid_lindblad.params import DerivedScales

MAX_BCH_ORDER = 4
SERIES_ORDERS = (1, 2)


def _nested(H: OperatorMatrix, X: OperatorMatrix, n: int) -> list[OperatorMatrix]:
    terms = [X]
    for _ in range(n):
        terms.append(commutator(-1j * H, terms[-1]))
    return terms


def bch_coefficient(n: int, H: OperatorMatrix, X: OperatorMatrix) -> OperatorMatrix:
    if not 0 <= n <= MAX_BCH_ORDER:
        raise UnsupportedOrderError(n, tuple(range(MAX_BCH_ORDER + 1)))
    return _nested(H, X, n)[-1] / math.factorial(n)


@dataclass(frozen=True)
class BchTermTable:
    order: int
    terms: tuple[OperatorMatrix, ...]
    scales: DerivedScales

    @classmethod
    def build(
        cls, order: int, H: OperatorMatrix, X: OperatorMatrix, scales: DerivedScales
    ) -> BchTermTable:
        if not 0 <= order <= MAX_BCH_ORDER:
            raise UnsupportedOrderError(order, tuple(range(MAX_BCH_ORDER + 1)))
        nested = _nested(H, X, order)
        terms = tuple(A / math.factorial(n) for n, A in enumerate(nested))
        return cls(order=order, terms=terms, scales=scales)

    def weighted_sum(self) -> OperatorMatrix:
        """sum_n n! xi^n A_n"""
        xi = self.scales.xi
        return sum(
            math.factorial(n) * xi**n * A for n, A in enumerate(self.terms)
        )

    def taylor(self, tau: float, order: int = None) -> OperatorMatrix:
        order = self.order if order is None else order
        return sum(A * tau**n for n, A in enumerate(self.terms[: order + 1]))


def truncated_flux_series(
    order: int, scales: DerivedScales, flux_fraction: float, N: int
) -> OperatorMatrix:
    if order not in SERIES_ORDERS:
        raise UnsupportedOrderError(order, SERIES_ORDERS)

    X, P = build_xp(N)
    xi = scales.xi
    series = X - xi * P
    if order == 2:
        S = sin_operator(scales, flux_fraction, N)
        series = series - xi**2 * (X + scales.sin_scale * S)
    return series


def heisenberg_flux_exact(
    tau: float, H: OperatorMatrix, X: OperatorMatrix
) -> OperatorMatrix:
    evals, V = linalg.eigh(H)
    U = (V * np.exp(-1j * evals * tau)) @ V.conj().T
    return U @ X @ U.conj().T


def truncation_error_slope(
    H: OperatorMatrix,
    X: OperatorMatrix,
    order: int,
    taus: np.ndarray = None,
) -> float:
    """Log-log slope of |X(-tau) - sum_{n<=order} A_n tau^n| against tau."""
    taus = np.geomspace(1e-3, 1e-2, 7) if taus is None else np.asarray(taus)
    table = BchTermTable.build(
        order, H, X, DerivedScales.dimensionless(nu_ratio=0.0, phase_scale=1.0)
    )
    errors = [
        np.linalg.norm(heisenberg_flux_exact(t, H, X) - table.taylor(t), 2)
        for t in taus
    ]
    slope, _ = np.polyfit(np.log(taus), np.log(errors), 1)
    return float(slope)
