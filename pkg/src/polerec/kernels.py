"""Backend selection for the hot reduction kernel.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``POLEREC_PURE_PYTHON=1`` before import forces the numpy
fallback.  ``matsubara_reduce`` also takes an explicit ``backend=`` override,
used by the benchmark and the equivalence tests.
"""

from __future__ import annotations

import os

import numpy as np

from . import _matsubara_numpy

try:
    from . import _matsubara as _compiled
except ImportError:  # pragma: no cover - depends on the build environment
    _compiled = None

_FORCE_PURE = os.environ.get("POLEREC_PURE_PYTHON", "0") not in ("", "0")

BACKENDS = ("compiled", "numpy")


def compiled_available() -> bool:
    return _compiled is not None


def active_backend() -> str:
    """Name of the backend picked at import time."""
    if _compiled is None or _FORCE_PURE:
        return "numpy"
    return "compiled"


def matsubara_reduce(values, z, c: float, beta: float, max_order: int, backend: str | None = None):
    """Dispatch the coefficient reduction to the selected backend.

    Args:
        values: complex array (n_points, n_columns), C-contiguous.
        z: complex grid points, shape (n_points,).
        c: map constant of the disk-pair geometry.
        beta: inverse temperature of the grid.
        max_order: number of coefficient orders per side.
        backend: "compiled" or "numpy" to override the import-time choice.

    Returns:
        (neg, pos) arrays of shape (max_order, n_columns): neg[i] is the
        coefficient of order -(i+1), pos[i] the one of order +(i+1).
    """
    name = backend if backend is not None else active_backend()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    values = np.ascontiguousarray(values, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel requested but the extension is not built")
        return _compiled.matsubara_reduce(values, z, float(c), float(beta), int(max_order))
    return _matsubara_numpy.matsubara_reduce(values, z, float(c), float(beta), int(max_order))
