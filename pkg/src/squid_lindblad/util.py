"""Vectorisation helpers and small utilities shared across modules.

Density matrices are vectorised by stacking columns, so that

    vec(A rho B) = kron(B.T, A) @ vec(rho)

and the trace is the dot product with vec(I).
"""

from __future__ import annotations

import hashlib
import json
import math
from functools import reduce

import numpy as np


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, N: int = None) -> np.ndarray:
    if N is None:
        N = math.isqrt(v.shape[0])
    return np.asarray(v).reshape((N, N), order="F")


def spre(A: np.ndarray) -> np.ndarray:
    """rho -> A rho"""
    return np.kron(np.eye(A.shape[0]), A)


def spost(A: np.ndarray) -> np.ndarray:
    """rho -> rho A"""
    return np.kron(A.T, np.eye(A.shape[0]))


def sprepost(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """rho -> A rho B"""
    return np.kron(B.T, A)


def commutator_super(A: np.ndarray) -> np.ndarray:
    return spre(A) - spost(A)


def double_commutator_super(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """rho -> [A, [B, rho]]"""
    return spre(A @ B) - sprepost(A, B) - sprepost(B, A) + spost(B @ A)


def commutator_anticommutator_super(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """rho -> [A, {B, rho}]"""
    return spre(A @ B) + sprepost(A, B) - sprepost(B, A) - spost(B @ A)


def dissipator_super(L: np.ndarray) -> np.ndarray:
    """rho -> L rho L^H - 1/2 {L^H L, rho}"""
    Ld = L.conj().T
    LdL = Ld @ L
    return sprepost(L, Ld) - 0.5 * spre(LdL) - 0.5 * spost(LdL)


def trace_row(N: int) -> np.ndarray:
    return vec(np.eye(N))


def leading_block_indices(N: int, M: int) -> np.ndarray:
    """Positions in vec(rho) of the entries rho[i, j] with i, j < M."""
    i, j = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
    return (i + N * j).reshape(-1, order="F")


def random_density_matrix(
    N: int, rng: np.random.Generator, rank: int = None
) -> np.ndarray:
    rank = N if rank is None else rank
    G = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_hermitian(N: int, rng: np.random.Generator, scale: float = 1.0):
    A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return scale * 0.5 * (A + A.conj().T)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    diff = rho - sigma
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


def deep_get(dictionary, keys, default=None):
    def get_val(obj, key, default):
        if isinstance(obj, dict):
            return obj.get(key, default)
        if isinstance(obj, (list, tuple)):
            return obj[key]
        return default

    return reduce(lambda d, key: get_val(d, key, default), keys, dictionary)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
