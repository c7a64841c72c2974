"""Truncated number-basis operators.

An operator is a dense complex ``numpy`` array of shape (N, N) in the
eigenbasis of the bare oscillator 1/2 (X^2 + P^2). Arrays are treated as
immutable once built.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy import linalg

from squid_lindblad.errors import (
    BasisSizeError,
    DimensionMismatchError,
    NotHermitianError,
)

OperatorMatrix = npt.NDArray[np.complex128]

HERMITIAN_RTOL = 1e-12

log = logging.getLogger(__name__)


def _check_size(N: int) -> None:
    if N < 2:
        raise BasisSizeError(N)


def build_ladder(N: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    _check_size(N)
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def build_xp(N: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    a, ad = build_ladder(N)
    X = (a + ad) / np.sqrt(2)
    P = (a - ad) / (1j * np.sqrt(2))
    return X, P


def quadrature_squares(N: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """X^2 and P^2 projected from a larger basis, so that
    1/2 (X^2 + P^2) is exactly diag(n + 1/2)."""
    _check_size(N)
    X, P = build_xp(N + 1)
    return (X @ X)[:N, :N], (P @ P)[:N, :N]


def number_operator(N: int) -> OperatorMatrix:
    _check_size(N)
    return np.diag(np.arange(N, dtype=float)).astype(complex)


def parity_operator(N: int) -> OperatorMatrix:
    """(-1)^n, which maps X -> -X and P -> -P."""
    _check_size(N)
    return np.diag((-1.0) ** np.arange(N)).astype(complex)


def hermitian_asymmetry(A: np.ndarray) -> float:
    return float(np.abs(A - A.conj().T).max()) if A.size else 0.0


def is_hermitian(A: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    asym = hermitian_asymmetry(A)
    return asym == 0.0 or asym < rtol * float(np.abs(A).max())


def hermitian_function(
    A: OperatorMatrix,
    scalar_function: Callable[[np.ndarray], np.ndarray],
    phase_offset: float = 0.0,
) -> OperatorMatrix:
    """f(A + phase_offset * I) through the spectral decomposition of A."""
    if not is_hermitian(A):
        raise NotHermitianError(hermitian_asymmetry(A))

    evals, U = linalg.eigh(0.5 * (A + A.conj().T))
    fvals = scalar_function(evals + phase_offset)
    return (U * fvals) @ U.conj().T


def _check_dims(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionMismatchError(A.shape, B.shape)


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    _check_dims(A, B)
    return A @ B - B @ A


def anticommutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    _check_dims(A, B)
    return A @ B + B @ A


def dump_operator(A: OperatorMatrix, path: str | Path) -> Path:
    """Row-major CSV dump: a header line ``N=<dim>`` followed by N*N rows of
    row, column, real part and imaginary part."""
    path = Path(path)
    N = A.shape[0]
    rows, cols = np.divmod(np.arange(N * N), N)
    flat = np.asarray(A).reshape(-1)
    frame = pd.DataFrame(
        {"row": rows, "col": cols, "re": flat.real, "im": flat.imag}
    )
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"N={N}\n")
        frame.to_csv(fh, index=False, float_format="%.16e", lineterminator="\n")
    log.info("operator of dimension %d written to %s", N, path)
    return path


def load_operator(path: str | Path) -> OperatorMatrix:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        N = int(fh.readline().strip().split("=", 1)[1])
        frame = pd.read_csv(fh)
    A = np.zeros((N, N), dtype=complex)
    A[frame["row"].to_numpy(), frame["col"].to_numpy()] = (
        frame["re"].to_numpy() + 1j * frame["im"].to_numpy()
    )
    return A
