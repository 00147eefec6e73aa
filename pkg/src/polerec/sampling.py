"""Evaluation grids for both access models and (noisy) sample sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .mobius import DiskPairConfig, t_to_z
from .models import MatrixPoleModel, NoiseSpec, PoleModel, add_noise, evaluate, evaluate_matrix

__all__ = [
    "RandomAccessGrid",
    "MatsubaraGrid",
    "SampleSet",
    "random_access_grid",
    "matsubara_grid",
    "sample",
    "sample_set_to_json",
    "sample_set_from_json",
]

RANDOM_ACCESS = "random"
MATSUBARA = "matsubara"
STATISTICS = ("boson", "fermion")


@dataclass(frozen=True)
class RandomAccessGrid:
    """Roots-of-unity nodes t_n and their images z_n on the imaginary axis.

    points_z[0] is inf: t_0 = 1 is the image of z = infinity.  Samplers assign
    the exact limit value 0 there instead of evaluating.
    """

    points_t: np.ndarray
    points_z: np.ndarray
    n_s: int


@dataclass(frozen=True)
class MatsubaraGrid:
    points_z: np.ndarray
    n_m: int
    beta: float
    statistics: str


@dataclass(frozen=True)
class SampleSet:
    """Function values over one of the two grids, scalar or matrix-valued."""

    access: str
    points_z: np.ndarray
    values: np.ndarray
    points_t: Optional[np.ndarray] = None
    n_s: Optional[int] = None
    n_m: Optional[int] = None
    beta: Optional[float] = None
    statistics: Optional[str] = None

    @property
    def is_matrix(self) -> bool:
        return self.values.ndim == 3

    @property
    def nb(self) -> Optional[int]:
        return self.values.shape[1] if self.is_matrix else None


def random_access_grid(n_s: int, cfg: DiskPairConfig) -> RandomAccessGrid:
    """Equispaced unit-circle nodes t_n = exp(2*pi*i*n/n_s) and their z-images.

    n_s must be even and at least 4.  The n = 0 node maps to infinity and is
    stored as inf; n = n_s/2 gives t = -1, i.e. z = 0.
    """
    if n_s % 2 != 0 or n_s < 4:
        raise ValueError(f"n_s must be even and >= 4, got {n_s}")
    t = np.exp(2j * np.pi * np.arange(n_s) / n_s)
    z = np.empty(n_s, dtype=np.complex128)
    z[0] = np.inf
    z[1:] = t_to_z(t[1:], cfg)
    return RandomAccessGrid(points_t=t, points_z=z, n_s=n_s)


def matsubara_grid(n_m: int, beta: float, statistics: str) -> MatsubaraGrid:
    """Imaginary frequencies 2n*pi*i/beta (bosons) or (2n+1)*pi*i/beta (fermions).

    Bosons run n = -n_m..n_m (including n = 0); fermions n = -n_m..n_m-1,
    which makes the fermionic set exactly symmetric under negation.
    """
    if n_m < 1:
        raise ValueError("n_m must be at least 1")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if statistics not in STATISTICS:
        raise ValueError(f"statistics must be one of {STATISTICS}, got {statistics!r}")
    if statistics == "boson":
        n = np.arange(-n_m, n_m + 1)
        omega = 2.0 * n * np.pi / beta
    else:
        n = np.arange(-n_m, n_m)
        omega = (2.0 * n + 1.0) * np.pi / beta
    return MatsubaraGrid(points_z=1j * omega, n_m=n_m, beta=beta, statistics=statistics)


def sample(
    model: Union[PoleModel, MatrixPoleModel],
    grid: Union[RandomAccessGrid, MatsubaraGrid],
    spec: NoiseSpec,
) -> SampleSet:
    """Evaluate the model on the grid and apply multiplicative noise.

    Noise draws consume one fresh generator seeded from ``spec.seed``, in grid
    order; sigma = 0 leaves the exact values bitwise untouched.
    """
    is_matrix = isinstance(model, MatrixPoleModel)
    z = grid.points_z
    if isinstance(grid, RandomAccessGrid):
        shape = (grid.n_s, model.nb, model.nb) if is_matrix else (grid.n_s,)
        values = np.zeros(shape, dtype=np.complex128)
        # node 0 is t = 1 (z = infinity): the model decays like 1/z, limit 0
        if is_matrix:
            values[1:] = evaluate_matrix(model, z[1:])
        else:
            values[1:] = evaluate(model, z[1:])
    else:
        values = evaluate_matrix(model, z) if is_matrix else evaluate(model, z)
    if spec.sigma > 0.0:
        rng = np.random.default_rng(spec.seed)
        values = add_noise(values, spec, rng)
    if isinstance(grid, RandomAccessGrid):
        return SampleSet(
            access=RANDOM_ACCESS,
            points_z=z,
            values=values,
            points_t=grid.points_t,
            n_s=grid.n_s,
        )
    return SampleSet(
        access=MATSUBARA,
        points_z=z,
        values=values,
        n_m=grid.n_m,
        beta=grid.beta,
        statistics=grid.statistics,
    )


def _complex_to_pair(x) -> list:
    return [float(np.real(x)), float(np.imag(x))]


def _values_to_json(values: np.ndarray) -> list:
    if values.ndim == 1:
        return [_complex_to_pair(v) for v in values]
    return [[[_complex_to_pair(v) for v in row] for row in mat] for mat in values]


def _values_from_json(raw, is_matrix: bool) -> np.ndarray:
    if not is_matrix:
        return np.array([complex(re, im) for re, im in raw], dtype=np.complex128)
    return np.array(
        [[[complex(re, im) for re, im in row] for row in mat] for mat in raw],
        dtype=np.complex128,
    )


def sample_set_to_json(samples: SampleSet) -> dict:
    """Serialize to the replay format: access tag, grid parameters, values."""
    doc: dict = {"access": samples.access}
    if samples.access == RANDOM_ACCESS:
        doc["n_s"] = int(samples.n_s)
    else:
        doc["n_m"] = int(samples.n_m)
        doc["beta"] = float(samples.beta)
        doc["statistics"] = samples.statistics
    if samples.is_matrix:
        doc["nb"] = int(samples.nb)
    doc["values"] = _values_to_json(samples.values)
    return doc


def sample_set_from_json(doc: dict, cfg: DiskPairConfig) -> SampleSet:
    """Rebuild a SampleSet from the replay format, reconstructing the grid."""
    access = doc["access"]
    is_matrix = "nb" in doc
    values = _values_from_json(doc["values"], is_matrix)
    if access == RANDOM_ACCESS:
        grid = random_access_grid(int(doc["n_s"]), cfg)
        if len(values) != grid.n_s:
            raise ValueError("sample count does not match n_s")
        return SampleSet(
            access=RANDOM_ACCESS,
            points_z=grid.points_z,
            values=values,
            points_t=grid.points_t,
            n_s=grid.n_s,
        )
    if access == MATSUBARA:
        grid = matsubara_grid(int(doc["n_m"]), float(doc["beta"]), doc["statistics"])
        if len(values) != len(grid.points_z):
            raise ValueError("sample count does not match the Matsubara grid")
        return SampleSet(
            access=MATSUBARA,
            points_z=grid.points_z,
            values=values,
            n_m=grid.n_m,
            beta=grid.beta,
            statistics=grid.statistics,
        )
    raise ValueError(f"unknown access tag {access!r}")
