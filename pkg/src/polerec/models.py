"""Pole/residue models, exact evaluation, multiplicative noise, and synthetic scenarios."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mobius import DiskPairConfig

__all__ = [
    "PoleModel",
    "MatrixPoleModel",
    "NoiseSpec",
    "evaluate",
    "evaluate_matrix",
    "add_noise",
    "generate_scenario",
    "SCENARIO_KINDS",
]

SCENARIO_KINDS = ("complex8", "real8", "matrix8")

# Generated scenarios keep poles at least this fraction of (b - a) apart;
# closely clustered nodes make the Hankel analysis needlessly ill-conditioned.
MIN_SEPARATION_FACTOR = 0.05
# The same concern applies in disk coordinates, where the recovery actually
# runs: the map compresses the far half of each disk so strongly that points
# respecting the plain distance floor can still collide there.
MIN_T_SEPARATION = 0.1
# Fraction of the disk radius (or diameter length) kept clear of the boundary.
BOUNDARY_MARGIN_FACTOR = 1e-3
POLES_PER_DISK = 4
MATRIX_DIM = 4


@dataclass(frozen=True)
class PoleModel:
    """A finite sum of simple poles: g(z) = sum_j residues[j] / (poles[j] - z)."""

    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self) -> None:
        poles = np.atleast_1d(np.asarray(self.poles, dtype=np.complex128))
        residues = np.atleast_1d(np.asarray(self.residues, dtype=np.complex128))
        if poles.ndim != 1 or poles.shape != residues.shape:
            raise ValueError("poles and residues must be 1-d arrays of equal length")
        if poles.size < 1:
            raise ValueError("a pole model needs at least one pole")
        if poles.size > 1:
            diff = poles[:, None] - poles[None, :]
            np.fill_diagonal(diff, np.inf)
            if np.min(np.abs(diff)) == 0.0:
                raise ValueError("pole locations must be pairwise distinct")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", residues)

    @property
    def n_poles(self) -> int:
        return self.poles.size


@dataclass(frozen=True)
class MatrixPoleModel:
    """Matrix-valued analogue: G(z) = sum_j residues[j] / (poles[j] - z).

    ``residues`` has shape (n_poles, nb, nb).  When the residues are rank-1,
    ``factors`` holds vectors v_j with residues[j] = outer(v_j, conj(v_j)).
    """

    poles: np.ndarray
    residues: np.ndarray
    factors: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        poles = np.atleast_1d(np.asarray(self.poles, dtype=np.complex128))
        residues = np.asarray(self.residues, dtype=np.complex128)
        if residues.ndim != 3 or residues.shape[1] != residues.shape[2]:
            raise ValueError("residues must have shape (n_poles, nb, nb)")
        if residues.shape[0] != poles.size:
            raise ValueError("one residue matrix per pole required")
        if residues.shape[1] < 1:
            raise ValueError("matrix dimension must be at least 1")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", residues)
        if self.factors is not None:
            factors = np.asarray(self.factors, dtype=np.complex128)
            if factors.shape != (poles.size, residues.shape[1]):
                raise ValueError("factors must have shape (n_poles, nb)")
            outer = factors[:, :, None] * factors[:, None, :].conj()
            if np.max(np.abs(outer - residues)) > 1e-12 * max(1.0, np.max(np.abs(residues))):
                raise ValueError("factors do not reproduce the residue matrices")
            object.__setattr__(self, "factors", factors)

    @property
    def n_poles(self) -> int:
        return self.poles.size

    @property
    def nb(self) -> int:
        return self.residues.shape[1]


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative noise level and the seed of its pseudorandom stream."""

    sigma: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


def evaluate(model: PoleModel, z):
    """Evaluate g(z) = sum_j r_j / (xi_j - z) at a scalar or array of points."""
    z = np.asarray(z, dtype=np.complex128)
    diffs = model.poles.reshape((-1,) + (1,) * z.ndim) - z
    if np.any(diffs == 0.0):
        raise ValueError("evaluation point coincides with a pole")
    out = (model.residues.reshape((-1,) + (1,) * z.ndim) / diffs).sum(axis=0)
    return out[()]


def evaluate_matrix(model: MatrixPoleModel, z):
    """Entrywise analogue of :func:`evaluate`; returns shape ``z.shape + (nb, nb)``."""
    z = np.asarray(z, dtype=np.complex128)
    diffs = model.poles.reshape((-1,) + (1,) * z.ndim) - z
    if np.any(diffs == 0.0):
        raise ValueError("evaluation point coincides with a pole")
    return np.einsum("j...,jkl->...kl", 1.0 / diffs, model.residues)


def add_noise(value, spec: NoiseSpec, rng: np.random.Generator):
    """Apply multiplicative noise: value * (1 + sigma * eta), eta complex standard normal.

    eta = (X + iY)/sqrt(2) with X, Y independent real standard normals, so
    E|eta|^2 = 1.  Draws fill in C order (grid index ascending, matrix entries
    row-major, X before Y), which pins the stream for a given seed.  With
    sigma = 0 the input is returned untouched, bit for bit.
    """
    if spec.sigma == 0.0:
        return value
    arr = np.asarray(value, dtype=np.complex128)
    draws = rng.standard_normal(arr.shape + (2,))
    eta = (draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2.0)
    noisy = arr * (1.0 + spec.sigma * eta)
    return noisy[()]


def _root_coordinate(z, cfg: DiskPairConfig):
    """Where this pole lands for the one-sided analyses: the disk image for
    the right half-plane, its reciprocal for the left (both inside the unit
    disk, so separations are comparable)."""
    t = (z - cfg.c) / (z + cfg.c)
    return t if abs(t) <= 1.0 else 1.0 / t


def _draw_disk_poles(rng, cfg: DiskPairConfig, center: complex, count: int, min_sep: float):
    """Uniform draws inside a disk, rejecting boundary-hugging or clustered points.

    Clustering is rejected both in place and in disk coordinates.
    """
    radius = cfg.disk_radius
    margin = BOUNDARY_MARGIN_FACTOR * radius
    picked: list[complex] = []
    while len(picked) < count:
        r = (radius - margin) * np.sqrt(rng.uniform())
        phase = rng.uniform(0.0, 2.0 * np.pi)
        cand = center + r * np.exp(1j * phase)
        if any(abs(cand - q) < min_sep for q in picked):
            continue
        if any(abs(_root_coordinate(cand, cfg) - _root_coordinate(q, cfg)) < MIN_T_SEPARATION for q in picked):
            continue
        picked.append(cand)
    return np.array(picked, dtype=np.complex128)


def _draw_interval_poles(rng, cfg: DiskPairConfig, lo: float, hi: float, count: int, min_sep: float):
    margin = BOUNDARY_MARGIN_FACTOR * (hi - lo)
    picked: list[float] = []
    while len(picked) < count:
        cand = rng.uniform(lo + margin, hi - margin)
        if any(abs(cand - q) < min_sep for q in picked):
            continue
        if any(abs(_root_coordinate(cand, cfg) - _root_coordinate(q, cfg)) < MIN_T_SEPARATION for q in picked):
            continue
        picked.append(cand)
    return np.array(picked, dtype=np.float64)


def generate_scenario(kind: str, cfg: DiskPairConfig, seed: int):
    """Build a synthetic ground-truth model with four poles per disk.

    Args:
        kind: ``complex8`` (poles uniform in each disk), ``real8`` (poles on
            the disks' real diameters), or ``matrix8`` (real poles, 4x4
            rank-1 residue matrices from complex factor vectors).
        cfg: disk geometry; pole draws respect its membership with margin.
        seed: seeds an independent generator, so scenarios are reproducible.

    Returns:
        ``PoleModel`` for the scalar kinds, ``MatrixPoleModel`` for matrix8.
        Residue (or factor-entry) magnitudes are uniform in [0.5, 2] with
        uniform random phase; real8 uses zero phase.
    """
    if kind not in SCENARIO_KINDS:
        raise ValueError(f"unknown scenario kind {kind!r}; expected one of {SCENARIO_KINDS}")
    rng = np.random.default_rng(seed)
    min_sep = MIN_SEPARATION_FACTOR * (cfg.b - cfg.a)
    n_total = 2 * POLES_PER_DISK

    if kind == "complex8":
        right = _draw_disk_poles(rng, cfg, cfg.disk_center + 0j, POLES_PER_DISK, min_sep)
        left = _draw_disk_poles(rng, cfg, -cfg.disk_center + 0j, POLES_PER_DISK, min_sep)
        poles = np.concatenate([right, left])
        mags = rng.uniform(0.5, 2.0, n_total)
        phases = rng.uniform(0.0, 2.0 * np.pi, n_total)
        return PoleModel(poles, mags * np.exp(1j * phases))

    # real8 and matrix8 both place poles on the real diameters (a, b) and (-b, -a)
    right = _draw_interval_poles(rng, cfg, cfg.a, cfg.b, POLES_PER_DISK, min_sep)
    left = _draw_interval_poles(rng, cfg, -cfg.b, -cfg.a, POLES_PER_DISK, min_sep)
    poles = np.concatenate([right, left]).astype(np.complex128)

    if kind == "real8":
        mags = rng.uniform(0.5, 2.0, n_total)
        return PoleModel(poles, mags.astype(np.complex128))

    mags = rng.uniform(0.5, 2.0, (n_total, MATRIX_DIM))
    phases = rng.uniform(0.0, 2.0 * np.pi, (n_total, MATRIX_DIM))
    factors = mags * np.exp(1j * phases)
    residues = factors[:, :, None] * factors[:, None, :].conj()
    return MatrixPoleModel(poles, residues, factors=factors)
