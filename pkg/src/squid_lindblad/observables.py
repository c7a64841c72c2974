from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from scipy import optimize

from squid_lindblad.config import GeneratorFamily, SimConfig
from squid_lindblad.errors import ParameterDomainError, SquidLindbladError
from squid_lindblad.MasterEquations import (
    GeneratorKind,
    Superoperator,
    ZetaSplit,
    assemble_liouvillian,
    build_cl_first,
    build_cl_second,
    build_lindblad_first,
    build_lindblad_second,
)
from squid_lindblad.operators import build_xp
from squid_lindblad.params import DerivedScales
from squid_lindblad.SteadyState import steady_state
from squid_lindblad.util import unvec, vec

log = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-8
ZETA_GRID_POINTS = 21
ZETA_EDGE = 1e-3
ZETA_XTOL = 1e-4
# flux band around the double-well dip left out of the order comparison
DIP_BAND = (0.45, 0.55)

CSV_COLUMNS = [
    "flux_fraction",
    "xi",
    "purity_first",
    "purity_second",
    "current_first_A",
    "current_second_A",
    "zeta_star",
    "residual_first",
    "residual_second",
    "gap_first",
    "gap_second",
    "N",
]


def purity(rho: np.ndarray) -> float:
    trace = np.trace(rho)
    if abs(trace - 1.0) > TRACE_TOLERANCE:
        raise ParameterDomainError("rho", f"trace {trace:.12g} differs from 1")
    return float(np.vdot(rho, rho).real)


def mean_flux(rho: np.ndarray) -> float:
    """<X> in the translated basis"""
    X, _ = build_xp(rho.shape[0])
    return float(np.trace(rho @ X).real)


def screening_current(rho: np.ndarray, scales: DerivedScales) -> float:
    """<Phi>/L in amperes."""
    return scales.flux_unit * mean_flux(rho) / scales.inductance


def damped_oscillation_frequency(
    G: Superoperator, block: int = None
) -> tuple[float, float]:
    """Decay rate and angular frequency of <X>(t), from the Heisenberg action
    of G on X and P restricted to the leading ``block`` levels.

    Only meaningful for generators quadratic in X and P, where the first
    moments close.
    """
    N = G.N
    block = N // 2 if block is None else block
    X, P = build_xp(N)
    MT = G.matrix.T

    def heisenberg(A):
        # Tr(A G[rho]) = Tr(G^dag[A] rho) with column stacking
        return unvec(MT @ vec(A.T), N).T

    columns = np.stack(
        [X[:block, :block].reshape(-1), P[:block, :block].reshape(-1)], axis=1
    )
    drift = np.empty((2, 2))
    for row, A in enumerate((X, P)):
        target = heisenberg(A)[:block, :block].reshape(-1)
        coef, *_ = np.linalg.lstsq(columns, target, rcond=None)
        drift[row] = coef.real

    ev = np.linalg.eigvals(drift)
    k = int(np.argmax(ev.imag))
    return float(-ev[k].real), float(abs(ev[k].imag))


def first_order_generator(
    scales: DerivedScales, flux_fraction: float, sim: SimConfig
) -> Superoperator:
    N, gamma = sim.basis_size, scales.gamma_ratio
    if sim.generators is GeneratorFamily.CALDEIRA_LEGGETT:
        return build_cl_first(
            scales, gamma, flux_fraction, N, renormalize=sim.renormalize
        )
    spec = build_lindblad_first(
        scales,
        gamma,
        flux_fraction,
        N,
        renormalize=sim.renormalize,
        include_squeeze=sim.include_squeeze,
    )
    return assemble_liouvillian(spec, GeneratorKind.LIND1)


def reduces_to_first_order(
    scales: DerivedScales, sim: SimConfig, zeta: float = None
) -> bool:
    """True when the second order Lindblad generator is Lind1 itself: every
    second order correction vanishes with xi, L2 included."""
    zeta = 1.0 - scales.xi if zeta is None else zeta
    return (
        sim.generators is GeneratorFamily.LINDBLAD
        and scales.xi == 0
        and zeta == 1.0
    )


def second_order_generator(
    scales: DerivedScales, flux_fraction: float, sim: SimConfig, zeta: float = None
) -> Superoperator:
    N, gamma = sim.basis_size, scales.gamma_ratio
    if sim.generators is GeneratorFamily.CALDEIRA_LEGGETT:
        return build_cl_second(
            scales, gamma, flux_fraction, N, renormalize=sim.renormalize
        )

    zeta = 1.0 - scales.xi if zeta is None else zeta
    if reduces_to_first_order(scales, sim, zeta):
        spec = build_lindblad_first(
            scales,
            gamma,
            flux_fraction,
            N,
            renormalize=sim.renormalize,
            include_squeeze=sim.include_squeeze,
        )
    else:
        spec = build_lindblad_second(
            scales,
            gamma,
            flux_fraction,
            ZetaSplit(zeta),
            N,
            renormalize=sim.renormalize,
            include_squeeze=sim.include_squeeze,
            sin_term=sim.sin_term,
        )
    return assemble_liouvillian(spec, GeneratorKind.LIND2)


@dataclass
class ZetaOptimum:
    zeta_star: float
    delta_min: float
    purity_first: float
    purity_second: float
    multimodal: bool
    grid: np.ndarray = field(repr=False)
    objective: np.ndarray = field(repr=False)


def _local_minima(values: np.ndarray) -> int:
    padded = np.concatenate(([np.inf], values, [np.inf]))
    return int(
        np.sum((padded[1:-1] < padded[:-2]) & (padded[1:-1] <= padded[2:]))
    )


def zeta_optimize(
    flux_fraction: float,
    scales: DerivedScales,
    sim: SimConfig,
    *,
    first_purity: float = None,
    grid_points: int = ZETA_GRID_POINTS,
) -> ZetaOptimum:
    """zeta* = argmin |purity_first - purity_second(zeta)| on (0, 1).

    A coarse grid locates the minimum, golden-section search refines it to
    ZETA_XTOL. A grid with several local minima is flagged and its global
    minimum kept unless the refinement improves on it.
    """
    if first_purity is None:
        G1 = first_order_generator(scales, flux_fraction, sim)
        first_purity = purity(steady_state(G1, check_gap=False).rho_ss)

    cache: dict[float, float] = {}

    def second_purity(zeta: float) -> float:
        if zeta not in cache:
            G2 = second_order_generator(scales, flux_fraction, sim, zeta)
            cache[zeta] = purity(steady_state(G2, check_gap=False).rho_ss)
        return cache[zeta]

    def objective(zeta: float) -> float:
        return abs(first_purity - second_purity(float(zeta)))

    grid = np.linspace(0.0, 1.0, grid_points)
    grid[0], grid[-1] = ZETA_EDGE, 1.0 - ZETA_EDGE
    values = np.array([objective(z) for z in grid])
    k = int(np.argmin(values))
    multimodal = _local_minima(values) > 1

    best_zeta, best_value = float(grid[k]), float(values[k])
    if 0 < k < len(grid) - 1:
        try:
            result = optimize.minimize_scalar(
                objective,
                bracket=(grid[k - 1], grid[k], grid[k + 1]),
                method="golden",
                options={"xtol": ZETA_XTOL},
            )
            if result.fun <= best_value:
                best_zeta, best_value = float(result.x), float(result.fun)
        except ValueError as exc:
            log.debug("golden refinement skipped: %s", exc)
    else:
        lo, hi = (grid[0], grid[1]) if k == 0 else (grid[-2], grid[-1])
        result = optimize.minimize_scalar(
            objective,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": ZETA_XTOL},
        )
        if result.fun <= best_value:
            best_zeta, best_value = float(result.x), float(result.fun)

    if multimodal:
        log.warning(
            "zeta objective at flux %.4f, xi %.4g has several minima",
            flux_fraction,
            scales.xi,
        )

    best_zeta = min(max(best_zeta, 0.0), 1.0)
    return ZetaOptimum(
        zeta_star=best_zeta,
        delta_min=best_value,
        purity_first=first_purity,
        purity_second=second_purity(best_zeta),
        multimodal=multimodal,
        grid=grid,
        objective=values,
    )


@dataclass
class SweepRecord:
    flux_fraction: float
    xi: float
    purity_first: float = math.nan
    purity_second: float = math.nan
    current_first_A: float = math.nan
    current_second_A: float = math.nan
    zeta_star: float = math.nan
    residual_first: float = math.nan
    residual_second: float = math.nan
    gap_first: float = math.nan
    gap_second: float = math.nan
    N: int = 0
    delta_min: float = math.nan
    gamma_ratio: float = math.nan
    min_eigenvalue_first: float = math.nan
    min_eigenvalue_second: float = math.nan
    max_real_first: float = math.nan
    max_real_second: float = math.nan
    method_first: str = ""
    method_second: str = ""
    multimodal: bool = False
    error: str | None = None

    def as_row(self) -> dict:
        data = asdict(self)
        return {k: data[k] for k in CSV_COLUMNS}

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> SweepRecord:
        return cls(**data)

    def add_error(self, message: str) -> None:
        self.error = message if self.error is None else f"{self.error}; {message}"


def evaluate_point(
    flux_fraction: float, scales: DerivedScales, sim: SimConfig
) -> SweepRecord:
    """Both orders' steady states at one flux point. Failures are recorded on
    the returned record, not raised."""
    record = SweepRecord(
        flux_fraction=float(flux_fraction),
        xi=scales.xi,
        N=sim.basis_size,
        gamma_ratio=scales.gamma_ratio,
    )

    r1 = None
    try:
        G1 = first_order_generator(scales, flux_fraction, sim)
        r1 = steady_state(G1, gap_threshold=sim.gap_threshold)
        record.purity_first = purity(r1.rho_ss)
        record.current_first_A = screening_current(r1.rho_ss, scales)
        record.residual_first = r1.residual_norm
        record.gap_first = r1.spectral_gap
        record.min_eigenvalue_first = r1.min_eigenvalue
        record.max_real_first = r1.max_real_eigenvalue
        record.method_first = r1.method
    except (SquidLindbladError, np.linalg.LinAlgError) as exc:
        log.warning("first order failed at flux %.6g: %s", flux_fraction, exc)
        record.add_error(f"first order: {exc}")

    try:
        zeta = sim.zeta
        if sim.generators is GeneratorFamily.LINDBLAD:
            if sim.optimize_zeta and not math.isnan(record.purity_first):
                opt = zeta_optimize(
                    flux_fraction, scales, sim, first_purity=record.purity_first
                )
                zeta = opt.zeta_star
                record.delta_min = opt.delta_min
                record.multimodal = opt.multimodal
            elif zeta is None:
                zeta = 1.0 - scales.xi
            record.zeta_star = zeta

        if r1 is not None and reduces_to_first_order(scales, sim, zeta):
            r2 = r1
        else:
            G2 = second_order_generator(scales, flux_fraction, sim, zeta)
            r2 = steady_state(G2, gap_threshold=sim.gap_threshold)
        record.purity_second = purity(r2.rho_ss)
        record.current_second_A = screening_current(r2.rho_ss, scales)
        record.residual_second = r2.residual_norm
        record.gap_second = r2.spectral_gap
        record.min_eigenvalue_second = r2.min_eigenvalue
        record.max_real_second = r2.max_real_eigenvalue
        record.method_second = r2.method
        if not sim.optimize_zeta and not math.isnan(record.purity_first):
            record.delta_min = abs(record.purity_first - record.purity_second)
    except (SquidLindbladError, np.linalg.LinAlgError) as exc:
        log.warning("second order failed at flux %.6g: %s", flux_fraction, exc)
        record.add_error(f"second order: {exc}")

    return record


def impurity_amplification(
    frame: pd.DataFrame, band: tuple[float, float] = DIP_BAND
) -> pd.DataFrame:
    """(1 - purity_second) / (1 - purity_first) at the flux point of largest
    first order impurity outside ``band``.

    One row per damping rate and cutoff; a frame without a ``gamma_ratio``
    column is treated as a single damping rate.
    """
    keys = [k for k in ("gamma_ratio", "xi") if k in frame.columns]
    columns = [*keys, "flux_fraction", "impurity_first", "impurity_second", "ratio"]
    outside = frame[~frame["flux_fraction"].between(*band)].dropna(
        subset=["purity_first", "purity_second"]
    )

    rows = []
    for key, group in outside.groupby(keys, sort=True):
        key = key if isinstance(key, tuple) else (key,)
        best = group.loc[(1.0 - group["purity_first"]).idxmax()]
        first = 1.0 - float(best["purity_first"])
        second = 1.0 - float(best["purity_second"])
        rows.append(
            {
                **dict(zip(keys, key)),
                "flux_fraction": float(best["flux_fraction"]),
                "impurity_first": first,
                "impurity_second": second,
                "ratio": second / first if first > 0 else math.nan,
            }
        )
    return pd.DataFrame(rows, columns=columns)
