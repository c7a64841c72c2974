from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigs

from squid_lindblad.errors import NonUniqueSteadyStateError, StepSizeError
from squid_lindblad.MasterEquations import Superoperator
from squid_lindblad.operators import build_xp
from squid_lindblad.util import trace_row, unvec, vec

log = logging.getLogger(__name__)

GAP_THRESHOLD = 1e-8
CONDITION_LIMIT = 1e12
# above this Liouvillian dimension the gap of a Lindblad generator comes
# from shift-invert Arnoldi on the eigenvalues nearest zero
DENSE_SPECTRUM_MAX_DIM = 400
ARNOLDI_EIGENVALUES = 8
MAX_STABLE_STEP = 0.1


@dataclass
class SteadyStateResult:
    rho_ss: np.ndarray
    residual_norm: float
    spectral_gap: float
    min_eigenvalue: float
    method: str = "direct"
    condition: float = float("nan")
    trace_error: float = 0.0
    hermiticity_error: float = 0.0
    max_real_eigenvalue: float = float("nan")
    diagnostics: dict = field(default_factory=dict)

    @property
    def negativity(self) -> float:
        """Magnitude of the most negative eigenvalue, 0 for a positive state."""
        return max(0.0, -self.min_eigenvalue)


def generator_norm(G: Superoperator) -> float:
    """max(|G|_1, |G|_inf), an upper bound of the spectral norm."""
    M = G.matrix
    return float(max(np.linalg.norm(M, 1), np.linalg.norm(M, np.inf)))


@dataclass(frozen=True)
class SpectralDiagnostics:
    gap: float
    # largest Re lambda; positive values mark a generator that is not a contraction
    max_real: float
    method: str


def _nearest_zero(M: np.ndarray, k: int) -> np.ndarray:
    try:
        return eigs(M, k=k, sigma=-1e-6, which="LM", return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        log.warning(
            "Arnoldi did not converge, using %d eigenvalues", len(exc.eigenvalues)
        )
        return exc.eigenvalues


def spectral_diagnostics(
    G: Superoperator,
    dense_max_dim: int = DENSE_SPECTRUM_MAX_DIM,
    full_spectrum: bool = None,
) -> SpectralDiagnostics:
    """Gap and largest real part of the Liouvillian spectrum.

    The gap is the smallest |Re lambda| once the eigenvalue of smallest
    modulus (the steady state) is removed. Caldeira-Leggett generators get
    the full dense spectrum at any size unless ``full_spectrum`` is False,
    since their positive eigenvalues need not lie near zero. Otherwise
    generators above ``dense_max_dim`` only see the eigenvalues nearest zero.
    """
    if full_spectrum is None:
        full_spectrum = not G.kind.is_lindblad
    if full_spectrum or G.dim <= dense_max_dim:
        ev, method = linalg.eigvals(G.matrix), "dense"
    else:
        ev, method = _nearest_zero(G.matrix, ARNOLDI_EIGENVALUES), "arnoldi"
    if len(ev) == 0:
        return SpectralDiagnostics(0.0, float("nan"), method)
    max_real = float(ev.real.max())
    if len(ev) < 2:
        return SpectralDiagnostics(0.0, max_real, method)
    order = np.argsort(np.abs(ev))
    gap = float(np.abs(ev[order[1:]].real).min())
    return SpectralDiagnostics(gap, max_real, method)


def spectral_gap(G: Superoperator, dense_max_dim: int = DENSE_SPECTRUM_MAX_DIM):
    return spectral_diagnostics(G, dense_max_dim).gap


def _direct_solve(M: np.ndarray, N: int):
    A = M.copy()
    weight = float(np.abs(M).mean())
    A[0, :] = weight * trace_row(N)
    b = np.zeros(A.shape[0], dtype=complex)
    b[0] = weight

    lu, piv = linalg.lu_factor(A, check_finite=False)
    (gecon,) = linalg.get_lapack_funcs(("gecon",), (lu,))
    rcond, _ = gecon(lu, np.linalg.norm(A, 1), norm="1")
    condition = np.inf if rcond == 0 else 1.0 / rcond
    return lu, piv, b, condition


def _eigen_solve(M: np.ndarray) -> np.ndarray:
    ev, vr = linalg.eig(M)
    k = int(np.argmin(np.abs(ev)))
    return vr[:, k]


def steady_state(
    G: Superoperator,
    *,
    gap_threshold: float = GAP_THRESHOLD,
    condition_limit: float = CONDITION_LIMIT,
    check_gap: bool = True,
) -> SteadyStateResult:
    """Solve G[rho] = 0, Tr rho = 1.

    One row of the linear system is replaced by the trace condition; when
    the condition estimate of that system exceeds ``condition_limit`` the
    eigenvector of smallest eigenvalue modulus is used instead.
    """
    N = G.N
    M = G.matrix

    gap = max_real = float("nan")
    if check_gap:
        spectrum = spectral_diagnostics(G)
        gap, max_real = spectrum.gap, spectrum.max_real
        if gap < gap_threshold:
            raise NonUniqueSteadyStateError(gap, gap_threshold)
        if max_real > 1e-10:
            log.info(
                "%s is not a contraction: max Re lambda = %.3e", G.kind.value, max_real
            )

    lu, piv, b, condition = _direct_solve(M, N)
    if condition > condition_limit:
        log.debug("condition estimate %.3e above limit, using eigen solver", condition)
        v = _eigen_solve(M)
        method = "eigen"
    else:
        v = linalg.lu_solve((lu, piv), b, check_finite=False)
        method = "direct"

    rho = unvec(v, N)
    trace = np.trace(rho)
    rho = rho / trace
    trace_error = float(abs(trace - 1.0)) if method == "direct" else 0.0
    hermiticity_error = float(np.abs(rho - rho.conj().T).max())
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real

    g_norm = np.linalg.norm(M)
    residual = float(np.linalg.norm(M @ vec(rho)) / g_norm) if g_norm > 0 else 0.0
    min_eig = float(np.linalg.eigvalsh(rho).min())

    if min_eig < -1e-8:
        log.warning(
            "%s steady state has negative eigenvalue %.3e", G.kind.value, min_eig
        )
    log.debug(
        "%s steady state: method %s, cond %.3e, residual %.3e, gap %.3e",
        G.kind.value,
        method,
        condition,
        residual,
        gap,
    )

    return SteadyStateResult(
        rho_ss=rho,
        residual_norm=residual,
        spectral_gap=gap,
        min_eigenvalue=min_eig,
        method=method,
        condition=float(condition),
        trace_error=trace_error,
        hermiticity_error=hermiticity_error,
        max_real_eigenvalue=max_real,
    )


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[np.ndarray]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def traces(self) -> np.ndarray:
        return np.array([np.trace(r).real for r in self.states])

    def purities(self) -> np.ndarray:
        return np.array([np.vdot(r, r).real for r in self.states])

    def min_eigenvalues(self) -> np.ndarray:
        return np.array(
            [np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min() for r in self.states]
        )


def rk4_propagator(M: np.ndarray, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of d v/dt = M v as a matrix."""
    h = dt * M
    eye = np.eye(M.shape[0], dtype=complex)
    h2 = h @ h
    return eye + h + h2 / 2 + h2 @ h / 6 + h2 @ h2 / 24


def evolve(
    G: Superoperator,
    rho0: np.ndarray,
    t_final: float,
    dt: float = None,
    n_records: int = 101,
) -> Trajectory:
    if t_final <= 0:
        return Trajectory(times=np.zeros(1), states=[np.array(rho0, dtype=complex)])

    norm = generator_norm(G)
    if dt is None:
        dt = 0.01 / norm if norm > 0 else t_final / max(n_records - 1, 1)
    if dt * norm >= MAX_STABLE_STEP:
        raise StepSizeError(dt, norm)

    n_steps = max(int(np.ceil(t_final / dt)), 1)
    dt = t_final / n_steps
    n_records = max(min(n_records, n_steps + 1), 2)
    steps_per_record = max(n_steps // (n_records - 1), 1)

    step = rk4_propagator(G.matrix, dt)
    jump = np.linalg.matrix_power(step, steps_per_record)

    N = G.N
    v = vec(rho0).astype(complex)
    times = [0.0]
    states = [unvec(v, N).copy()]
    done = 0
    while done + steps_per_record <= n_steps:
        v = jump @ v
        done += steps_per_record
        times.append(done * dt)
        states.append(unvec(v, N).copy())
        log.debug("trace: t = %.6e, trace %.15f", done * dt, states[-1].trace().real)
    if done < n_steps:
        v = np.linalg.matrix_power(step, n_steps - done) @ v
        times.append(n_steps * dt)
        states.append(unvec(v, N).copy())

    log.debug("evolved %d RK4 steps of %.3e to t = %.3e", n_steps, dt, n_steps * dt)
    return Trajectory(times=np.array(times), states=states)


@dataclass
class ConvergenceReport:
    frame: pd.DataFrame
    tolerance: float

    @property
    def converged(self) -> bool:
        last = self.frame["delta_purity"].iloc[-1]
        return bool(np.isfinite(last) and abs(last) <= self.tolerance)

    @property
    def monotone(self) -> bool:
        d = self.frame["delta_purity"].abs().to_numpy()[1:]
        return bool(np.all(np.diff(d) <= 1e-14))

    @property
    def flagged(self) -> bool:
        return not (self.converged and self.monotone)


def convergence_scan(
    build: Callable[[int], Superoperator],
    N_list: Sequence[int],
    *,
    tolerance: float = 1e-4,
    gap_threshold: float = GAP_THRESHOLD,
) -> ConvergenceReport:
    """Steady-state purity and <X> for each basis size in ``N_list``.

    ``build`` maps a basis size to the generator, usually a
    ``functools.partial`` of one of the builders in ``MasterEquations``.
    """
    N_list = list(N_list)
    if N_list != sorted(N_list):
        raise ValueError("N_list must be ascending")

    rows = []
    for N in N_list:
        result = steady_state(build(N), gap_threshold=gap_threshold)
        X, _ = build_xp(N)
        rho = result.rho_ss
        rows.append(
            {
                "N": N,
                "purity": float(np.vdot(rho, rho).real),
                "mean_x": float(np.trace(rho @ X).real),
            }
        )
    frame = pd.DataFrame(rows)
    frame["delta_purity"] = frame["purity"].diff()
    frame["delta_x"] = frame["mean_x"].diff()

    report = ConvergenceReport(frame=frame, tolerance=tolerance)
    if report.flagged:
        log.warning("basis convergence flagged:\n%s", frame.to_string(index=False))
    return report
