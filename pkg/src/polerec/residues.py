"""Residue recovery by linear least squares against the sampled values.

The design matrix A[n, j] = 1/(poles[j] - z_n) is Cauchy-like and can be
badly conditioned, so everything goes through orthogonal factorizations.
Large grids (millions of Matsubara points) are reduced chunk by chunk: the
QR triangle of [A | b] is a complete summary of the least-squares problem, so
stacking each chunk under the running triangle and re-triangularizing never
holds more than one chunk in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .sampling import SampleSet

__all__ = ["ResidueFit", "ResidueSolveError", "solve_residues", "solve_residues_matrix", "rank1_extract"]

_CHUNK = 1 << 16
_CONDITION_LIMIT = 1e14


class ResidueSolveError(RuntimeError):
    """Raised when the design matrix is numerically rank deficient."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class ResidueFit:
    residues: np.ndarray
    residual_norm: float
    condition: float


def _finite_points(samples: SampleSet):
    """Grid points usable in the fit.  The t = 1 node maps to infinity, where
    both its design row and its assigned value are exactly zero; dropping the
    row changes nothing."""
    mask = np.isfinite(samples.points_z)
    return samples.points_z[mask], samples.values[mask]


def _reduced_triangle(points, rhs, poles, real_mode: bool) -> np.ndarray:
    """QR triangle of the augmented system [A | rhs], built chunkwise."""
    n_poles = len(poles)
    n_rhs = rhs.shape[1]
    width = n_poles + n_rhs
    state: Optional[np.ndarray] = None
    for start in range(0, len(points), _CHUNK):
        pts = points[start : start + _CHUNK]
        design = 1.0 / (poles[None, :] - pts[:, None])
        block = np.hstack([design, rhs[start : start + _CHUNK]])
        if real_mode:
            block = np.vstack([block.real, block.imag])
        stacked = block if state is None else np.vstack([state, block])
        state = np.linalg.qr(stacked, mode="r")
    if state is None or state.shape[0] < width:
        raise ResidueSolveError("not enough sample points for the number of poles", np.inf)
    return state


def _solve_from_triangle(state: np.ndarray, n_poles: int):
    r11 = state[:n_poles, :n_poles]
    target = state[:n_poles, n_poles:]
    tail = state[n_poles:, n_poles:]
    s = np.linalg.svd(r11, compute_uv=False)
    condition = np.inf if s[-1] == 0.0 else float(s[0] / s[-1])
    if not np.isfinite(condition) or condition > _CONDITION_LIMIT:
        raise ResidueSolveError(
            f"design matrix is numerically rank deficient (condition ~ {condition:.3g}); "
            "poles are likely near-duplicates",
            condition,
        )
    x = solve_triangular(r11, target)
    residual = float(np.linalg.norm(tail))
    return x, residual, condition


def solve_residues(poles, samples: SampleSet, real_mode: bool = False) -> ResidueFit:
    """Fit scalar residues to the samples by least squares.

    In real mode the real and imaginary parts of the system are stacked into
    one real problem, so the fitted residues are exactly real.
    """
    poles = np.asarray(poles, dtype=np.complex128)
    if poles.size == 0:
        raise ValueError("at least one pole is required")
    if poles.size > 1:
        diff = poles[:, None] - poles[None, :]
        np.fill_diagonal(diff, np.inf)
        if np.min(np.abs(diff)) == 0.0:
            raise ValueError("poles must be distinct")
    points, values = _finite_points(samples)
    state = _reduced_triangle(points, values.reshape(-1, 1), poles, real_mode)
    x, residual, condition = _solve_from_triangle(state, poles.size)
    residues = x[:, 0].astype(np.complex128)
    return ResidueFit(residues=residues, residual_norm=residual, condition=condition)


def solve_residues_matrix(poles, samples: SampleSet) -> ResidueFit:
    """Matrix-valued fit: each sample matrix is row-vectorized into the
    right-hand side, and each solution row reshapes back to one residue matrix."""
    poles = np.asarray(poles, dtype=np.complex128)
    if poles.size == 0:
        raise ValueError("at least one pole is required")
    if not samples.is_matrix:
        raise ValueError("solve_residues_matrix needs matrix-valued samples")
    points, values = _finite_points(samples)
    nb = values.shape[1]
    rhs = values.reshape(len(values), nb * nb)
    state = _reduced_triangle(points, rhs, poles, real_mode=False)
    x, residual, condition = _solve_from_triangle(state, poles.size)
    residues = x.reshape(poles.size, nb, nb)
    return ResidueFit(residues=residues, residual_norm=residual, condition=condition)


def rank1_extract(matrix: np.ndarray):
    """Best rank-1 factor of a (noisy) Hermitian-model residue matrix.

    Returns (v, quality) with v*v^H the rank-1 approximation of the
    Hermitian part of the input and quality = s2/s1 (0 means exactly rank-1).
    The phase is fixed so the largest-magnitude entry of v is real positive.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("rank1_extract needs a square matrix")
    if not matrix.any():
        return np.zeros(matrix.shape[0], dtype=np.complex128), 0.0
    hermitian = 0.5 * (matrix + matrix.conj().T)
    u, s, _ = np.linalg.svd(hermitian)
    v = np.sqrt(s[0]) * u[:, 0]
    quality = float(s[1] / s[0]) if s.size > 1 and s[0] > 0 else 0.0
    pivot = int(np.argmax(np.abs(v)))
    if abs(v[pivot]) > 0:
        v = v * (np.conj(v[pivot]) / abs(v[pivot]))
    return v, quality
