"""Pure-numpy fallback for the Matsubara reduction kernel.

Mirrors the compiled extension's contract.  Accumulation relies on numpy's
pairwise summation (error growth O(log n)) instead of the extension's Kahan
loop; both are far below the quadrature's own truncation error.
"""

from __future__ import annotations

import numpy as np


def matsubara_reduce(values: np.ndarray, z: np.ndarray, c: float, beta: float, max_order: int):
    """Return (neg, pos), each of shape (max_order, n_columns)."""
    if values.ndim != 2 or z.shape != (values.shape[0],):
        raise ValueError("values must be (n_points, n_columns) with matching z")
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    t = (z - c) / (z + c)
    u = (z + c) / (z - c)
    base = (-1.0 / beta) * 2.0 * c / (z + c) ** 2
    n_col = values.shape[1]
    neg = np.empty((max_order, n_col), dtype=np.complex128)
    pos = np.empty((max_order, n_col), dtype=np.complex128)
    wt = base.copy()     # base * t**i
    wu = base * u * u    # base * u**(i+2)
    for i in range(max_order):
        for col in range(n_col):
            neg[i, col] = np.sum(values[:, col] * wt)
            pos[i, col] = np.sum(values[:, col] * wu)
        wt *= t
        wu *= u
    return neg, pos
