"""Generators of the reduced SQUID dynamics in dimensionless time omega0*t.

Two families are built at first and second order in xi = omega0/Omega:

* Caldeira-Leggett (CL1, CL2): the Born-Markov result with the flux series
  truncated, written with commutators and anticommutators of X, P and
  S = sin(k X + 2 pi phi_x). Not of Lindblad form.
* Lindblad (LIND1, LIND2): the same generators completed by the smallest
  double commutators in P (and S) that make them completely positive, with
  the Hamiltonian terms that completion requires.

Superoperators act on column-stacked density matrices (see ``util``).
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import linalg

from squid_lindblad.errors import (
    DegenerateSplitError,
    ParameterDomainError,
    UnsupportedOrderError,
)
from squid_lindblad.hamiltonian import (
    HamiltonianConfig,
    RenormalizationOrder,
    SinTermCoefficient,
    build_system_hamiltonian,
    sin_operator,
    sin_term_coefficient,
)
from squid_lindblad.operators import OperatorMatrix, build_xp, is_hermitian
from squid_lindblad.params import DerivedScales
from squid_lindblad.util import (
    commutator_anticommutator_super,
    commutator_super,
    dissipator_super,
    double_commutator_super,
    leading_block_indices,
    trace_row,
    unvec,
    vec,
)

log = logging.getLogger(__name__)


class GeneratorKind(enum.Enum):
    CL1 = "CL1"
    CL2 = "CL2"
    LIND1 = "Lind1"
    LIND2 = "Lind2"

    @property
    def order(self) -> int:
        return 1 if self in (GeneratorKind.CL1, GeneratorKind.LIND1) else 2

    @property
    def is_lindblad(self) -> bool:
        return self in (GeneratorKind.LIND1, GeneratorKind.LIND2)


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray
    kind: GeneratorKind

    @property
    def N(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.N)

    def trace_defect(self) -> float:
        """max |Tr G[.]| over basis matrices."""
        return float(np.abs(trace_row(self.N) @ self.matrix).max())

    def spectrum(self) -> np.ndarray:
        return linalg.eigvals(self.matrix)

    def dump_spectrum(self, path: str | Path) -> Path:
        path = Path(path)
        ev = self.spectrum()
        order = np.lexsort((ev.imag, -ev.real))
        frame = pd.DataFrame({"real": ev.real[order], "imag": ev.imag[order]})
        frame.to_csv(path, index=False, float_format="%.16e", lineterminator="\n")
        log.info(
            "%s spectrum (%d eigenvalues) written to %s", self.kind.value, len(ev), path
        )
        return path


@dataclass(frozen=True)
class LindbladSpec:
    H_eff: OperatorMatrix
    lindblads: tuple[OperatorMatrix, ...]

    def __post_init__(self):
        if not self.lindblads:
            raise ValueError("a Lindblad generator needs at least one operator")
        if not is_hermitian(self.H_eff, rtol=1e-10):
            raise ValueError("effective Hamiltonian is not Hermitian")


@dataclass(frozen=True)
class ZetaSplit:
    """Share of the (1 - xi^2)[X,[X,.]] noise split between the two second
    order Lindblad operators.

    ``zeta`` is the reported parameter; ``l2_weight = 1 - zeta`` is the
    fraction carried by L2. zeta = 1 - xi reproduces the standard
    minimally invasive choice, for which L2 carries a fraction xi.
    """

    zeta: float
    convention: str = field(default="l2_weight = 1 - zeta", compare=False)

    def __post_init__(self):
        if not 0 <= self.zeta <= 1:
            raise ParameterDomainError("zeta", "must lie in [0, 1]")

    @property
    def l2_weight(self) -> float:
        return 1.0 - self.zeta

    @classmethod
    def from_cutoff(cls, xi: float) -> ZetaSplit:
        return cls(1.0 - xi)


def _as_split(zeta) -> ZetaSplit:
    return zeta if isinstance(zeta, ZetaSplit) else ZetaSplit(float(zeta))


def _hamiltonian(
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    N: int,
    order: int,
    renormalize: bool,
    include_squeeze: bool,
    sin_term: SinTermCoefficient = None,
) -> OperatorMatrix:
    if renormalize:
        renorm = (
            RenormalizationOrder.FIRST if order == 1 else RenormalizationOrder.SECOND
        )
    else:
        renorm = RenormalizationOrder.NONE
    config = HamiltonianConfig(
        flux_fraction=flux_fraction,
        renormalization_order=renorm,
        include_squeeze=include_squeeze,
        include_second_order_sin_term=sin_term is not None,
        sin_term=sin_term or SinTermCoefficient.DERIVED,
    )
    return build_system_hamiltonian(scales.with_gamma(gamma), config, N)


def build_cl_first(
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    N: int,
    *,
    renormalize: bool = False,
) -> Superoperator:
    """-i[H,.] - i g [X,{P,.}] - (g/2)[X,[X,.]] + (g xi/2)[X,[P,.]]

    ``gamma`` is the damping rate in units of omega0.
    """
    H = _hamiltonian(scales, gamma, flux_fraction, N, 1, renormalize, False)
    X, P = build_xp(N)
    xi = scales.xi

    G = (
        -1j * commutator_super(H)
        - 1j * gamma * commutator_anticommutator_super(X, P)
        - 0.5 * gamma * double_commutator_super(X, X)
        + 0.5 * gamma * xi * double_commutator_super(X, P)
    )
    return Superoperator(G, GeneratorKind.CL1)


def build_cl_second(
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    N: int,
    *,
    renormalize: bool = False,
) -> Superoperator:
    H = _hamiltonian(scales, gamma, flux_fraction, N, 2, renormalize, False)
    X, P = build_xp(N)
    S = sin_operator(scales, flux_fraction, N)
    xi, s = scales.xi, scales.sin_scale

    G = (
        -1j * commutator_super(H)
        # first and second order dissipation
        - 1j * gamma * commutator_anticommutator_super(X, P)
        - 1j * gamma * xi * s * commutator_anticommutator_super(X, S)
        # noise
        - 0.5 * gamma * (1 - xi**2) * double_commutator_super(X, X)
        # first and second order cutoff
        + 0.5 * gamma * xi * double_commutator_super(X, P)
        + 0.5 * gamma * xi**2 * s * double_commutator_super(X, S)
    )
    return Superoperator(G, GeneratorKind.CL2)


def build_lindblad_first(
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    N: int,
    *,
    renormalize: bool = False,
    include_squeeze: bool = True,
    mutate_p_sign: bool = False,
) -> LindbladSpec:
    """L = sqrt(g) [X + (i - xi/2) P] with the squeeze term in H.

    ``mutate_p_sign`` flips the sign of the P coefficient; it exists to check
    that the consistency test notices a broken generator.
    """
    H = _hamiltonian(scales, gamma, flux_fraction, N, 1, renormalize, include_squeeze)
    X, P = build_xp(N)
    c = 1j - 0.5 * scales.xi
    if mutate_p_sign:
        c = -c
    L = np.sqrt(gamma) * (X + c * P)
    return LindbladSpec(H_eff=H, lindblads=(L,))


def build_lindblad_second(
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    zeta: ZetaSplit | float,
    N: int,
    *,
    renormalize: bool = False,
    include_squeeze: bool = True,
    sin_term: SinTermCoefficient = SinTermCoefficient.DERIVED,
) -> LindbladSpec:
    """Two Lindblad operators

        L1 = sqrt(g) [ a1 X + (i - xi/2) / a1 P ],     a1^2 = (1 - w)(1 - xi^2)
        L2 = sqrt(g) [ a2 X + xi s (i - xi/2) / a2 S ], a2^2 = w (1 - xi^2)

    with w = 1 - zeta the share of the X noise carried by L2 and
    s = sqrt(beta nu / omega0). H carries the squeeze and the symmetrized
    X S term.
    """
    split = _as_split(zeta)
    if not 0 < split.zeta < 1:
        raise DegenerateSplitError(split.zeta)
    xi, s = scales.xi, scales.sin_scale
    if not 0 <= xi < 1:
        raise ParameterDomainError("xi", "second order Lindblad form needs xi < 1")

    H = _hamiltonian(
        scales, gamma, flux_fraction, N, 2, renormalize, include_squeeze, sin_term
    )
    X, P = build_xp(N)
    S = sin_operator(scales, flux_fraction, N)

    c = 1j - 0.5 * xi
    a1 = np.sqrt((1 - split.l2_weight) * (1 - xi**2))
    a2 = np.sqrt(split.l2_weight * (1 - xi**2))
    L1 = np.sqrt(gamma) * (a1 * X + (c / a1) * P)
    L2 = np.sqrt(gamma) * (a2 * X + (xi * s * c / a2) * S)
    return LindbladSpec(H_eff=H, lindblads=(L1, L2))


def assemble_liouvillian(
    spec: LindbladSpec, kind: GeneratorKind = None
) -> Superoperator:
    """-i[H,.] + sum_j (L_j . L_j^H - 1/2 {L_j^H L_j, .})"""
    if kind is None:
        kind = GeneratorKind.LIND1 if len(spec.lindblads) == 1 else GeneratorKind.LIND2
    G = -1j * commutator_super(spec.H_eff)
    for L in spec.lindblads:
        G = G + dissipator_super(L)
    return Superoperator(G, kind)


@dataclass
class DefectReport:
    """Least-squares decomposition of (Lindblad - Caldeira-Leggett) onto
    double commutators written as dissipators, -1/2 [A,[B,.]].

    The fit only uses density matrices supported on the leading N-1 levels,
    where the truncated [X, P] equals i.
    """

    order: int
    basis: tuple[str, ...]
    coefficients: dict[str, complex]
    expected: dict[str, float]
    residual: float
    printed_coefficient: float = None
    derived_coefficient: float = None
    best_coefficient: float = None
    residual_printed: float = None
    residual_derived: float = None

    @property
    def printed_is_optimal(self) -> bool | None:
        if self.best_coefficient is None:
            return None
        scale = max(1.0, abs(self.best_coefficient))
        return abs(self.best_coefficient - self.printed_coefficient) <= 1e-6 * scale


def _projected_residual(columns: np.ndarray, target: np.ndarray):
    coef, *_ = np.linalg.lstsq(columns, target, rcond=None)
    return coef, target - columns @ coef


def verify_lindblad_consistency(
    order: int,
    scales: DerivedScales,
    gamma: float,
    flux_fraction: float,
    zeta: ZetaSplit | float = None,
    N: int = 20,
    *,
    mutate_p_sign: bool = False,
    sin_term: SinTermCoefficient = SinTermCoefficient.DERIVED,
) -> DefectReport:
    X, P = build_xp(N)
    cols = leading_block_indices(N, N - 1)

    if order == 1:
        lind = assemble_liouvillian(
            build_lindblad_first(
                scales, gamma, flux_fraction, N, mutate_p_sign=mutate_p_sign
            )
        )
        cl = build_cl_first(scales, gamma, flux_fraction, N)
        names = ("PP",)
        basis = [-0.5 * double_commutator_super(P, P)]
        expected = {"PP": gamma * (1 + 0.25 * scales.xi**2)}
    elif order == 2:
        split = ZetaSplit.from_cutoff(scales.xi) if zeta is None else _as_split(zeta)
        spec = build_lindblad_second(
            scales, gamma, flux_fraction, split, N, sin_term=sin_term
        )
        lind = assemble_liouvillian(spec, GeneratorKind.LIND2)
        cl = build_cl_second(scales, gamma, flux_fraction, N)
        S = sin_operator(scales, flux_fraction, N)
        names = ("PP", "SS", "PS")
        basis = [
            -0.5 * double_commutator_super(P, P),
            -0.5 * double_commutator_super(S, S),
            -0.5 * (double_commutator_super(P, S) + double_commutator_super(S, P)),
        ]
        xi, s = scales.xi, scales.sin_scale
        w = split.l2_weight
        c2 = 1 + 0.25 * xi**2
        expected = {
            "PP": gamma * c2 / ((1 - w) * (1 - xi**2)),
            "SS": gamma * (xi * s) ** 2 * c2 / (w * (1 - xi**2)),
            "PS": 0.0,
        }
    else:
        raise UnsupportedOrderError(order, (1, 2))

    delta = (lind.matrix - cl.matrix)[:, cols].reshape(-1)
    columns = np.stack([B[:, cols].reshape(-1) for B in basis], axis=1)
    coef, res = _projected_residual(columns, delta)
    norm = np.linalg.norm(delta)
    residual = float(np.linalg.norm(res) / norm) if norm > 0 else 0.0

    report = DefectReport(
        order=order,
        basis=names,
        coefficients=dict(zip(names, coef)),
        expected=expected,
        residual=residual,
    )
    log.debug(
        "order %d defect fit: %s, residual %.3e", order, report.coefficients, residual
    )

    if order == 2:
        _scan_sin_coefficient(
            report,
            scales,
            gamma,
            flux_fraction,
            sin_term,
            N,
            X,
            S,
            columns,
            delta,
            cols,
        )
    return report


def _scan_sin_coefficient(
    report, scales, gamma, flux_fraction, sin_term, N, X, S, columns, delta, cols
):
    """The Hamiltonian X S term enters the generator linearly, so the
    residual as a function of its coefficient is minimized in closed form."""
    used = sin_term_coefficient(scales, gamma, sin_term)
    T = 0.5 * (X @ S + S @ X)
    direction = (-1j * commutator_super(T))[:, cols].reshape(-1)
    # delta(c) = delta_0 + c * direction, with delta_0 the defect without the term
    delta0 = delta - used * direction

    _, r0 = _projected_residual(columns, delta0)
    _, r1 = _projected_residual(columns, direction)

    norm = np.linalg.norm(delta0)

    def residual_at(c: float) -> float:
        if norm == 0:
            return 0.0
        return float(np.linalg.norm(r0 + c * r1) / norm)

    r1_norm = np.vdot(r1, r1).real
    best = -np.vdot(r1, r0).real / r1_norm if r1_norm > 0 else used

    report.printed_coefficient = sin_term_coefficient(
        scales, gamma, SinTermCoefficient.PRINTED
    )
    report.derived_coefficient = sin_term_coefficient(
        scales, gamma, SinTermCoefficient.DERIVED
    )
    report.best_coefficient = float(best)
    report.residual_printed = residual_at(report.printed_coefficient)
    report.residual_derived = residual_at(report.derived_coefficient)
