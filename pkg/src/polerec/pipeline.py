"""End-to-end recovery for both access models, and evaluation against truth."""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .mobius import DiskPairConfig, t_to_z
from .models import MatrixPoleModel, PoleModel
from .prony import SideRecovery, recover_side
from .residues import rank1_extract, solve_residues, solve_residues_matrix
from .sampling import MATSUBARA, RANDOM_ACCESS, SampleSet
from .spectral import FourierCoeffs, fourier_from_circle, fourier_from_matsubara

__all__ = [
    "RecoveryConfig",
    "RecoveryResult",
    "MatchedPair",
    "MatchReport",
    "recover",
    "match_poles",
    "complex_to_pair",
]

# Floor for the rank-decision threshold when the noise level is zero/unknown.
EPS_FLOOR = 1e-12
# A recovered pole farther than this fraction of (b - a) from every true pole
# counts as unmatched when scoring against ground truth.
MATCH_CAP_FACTOR = 0.25


def complex_to_pair(x) -> list:
    return [float(np.real(x)), float(np.imag(x))]


@dataclass
class RecoveryConfig:
    """Everything the pipeline needs besides the samples themselves."""

    cfg: DiskPairConfig
    access: str = RANDOM_ACCESS
    n_s: int = 1024
    n_m: int = 1_000_000
    beta: float = 10.0 * math.pi
    statistics: str = "boson"
    d_max: int = 12
    l: Optional[int] = None
    eps: Optional[float] = None
    sigma: float = 0.0  # known noise level; only drives the default eps
    real_mode: bool = False
    matrix: bool = False
    rank1: bool = False

    def __post_init__(self) -> None:
        if self.l is None:
            self.l = self.d_max
        if self.d_max < 1:
            raise ValueError("d_max must be at least 1")
        if self.l < self.d_max:
            raise ValueError(f"need l >= d_max, got l={self.l}, d_max={self.d_max}")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("eps must be positive when given")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.access not in (RANDOM_ACCESS, MATSUBARA):
            raise ValueError(f"unknown access model {self.access!r}")
        if self.access == RANDOM_ACCESS:
            if self.n_s % 2 != 0 or self.n_s < 2 * (self.d_max + self.l):
                raise ValueError(
                    f"n_s must be even and >= 2*(d_max + l) = {2 * (self.d_max + self.l)}, got {self.n_s}"
                )
            if self.n_s <= 10.0 * math.sqrt(self.cfg.b / self.cfg.a):
                warnings.warn(
                    f"n_s={self.n_s} is not large against sqrt(b/a)="
                    f"{math.sqrt(self.cfg.b / self.cfg.a):.3g}; the circle quadrature "
                    "may not have converged",
                    stacklevel=2,
                )

    def effective_eps(self, nb: int = 1) -> float:
        """Rank threshold: explicit eps, else a noise-level heuristic.

        The 10*sigma rule is calibrated for scalar windows.  Vectorized
        matrix windows stack nb^2 rows per shift and their leading singular
        value grows with the factor norms, which pushes the noise floor down
        by roughly nb^2 relative to s1; the default scales accordingly so a
        weak pole is not drowned by a scalar-sized threshold.
        """
        if self.eps is not None:
            return self.eps
        return max(10.0 * self.sigma / (nb * nb), EPS_FLOOR)

    @property
    def max_order(self) -> int:
        return self.d_max + self.l - 1


@dataclass
class RecoveryResult:
    """Recovered model plus the diagnostics needed to audit the rank decisions."""

    poles: np.ndarray
    residues: np.ndarray
    inside: SideRecovery
    outside: SideRecovery
    fit_residual: Optional[float]
    condition: Optional[float]
    config: RecoveryConfig
    coefficients: FourierCoeffs
    factors: Optional[np.ndarray] = None
    factor_quality: Optional[np.ndarray] = None
    elapsed_seconds: float = 0.0

    @property
    def n_poles(self) -> int:
        return self.poles.size

    def to_json_dict(self, include_coefficients: bool = False, include_timing: bool = False) -> dict:
        """Serializable summary.  Timing is excluded by default so identical
        inputs yield byte-identical documents."""
        doc: dict = {"recovered_poles": [complex_to_pair(p) for p in self.poles]}
        if self.residues.ndim == 1:
            doc["residues"] = [complex_to_pair(r) for r in self.residues]
        else:
            doc["residue_matrices"] = [
                [[complex_to_pair(v) for v in row] for row in mat] for mat in self.residues
            ]
        if self.factors is not None:
            doc["rank1_factors"] = [[complex_to_pair(v) for v in vec] for vec in self.factors]
            doc["rank1_quality"] = [float(q) for q in self.factor_quality]
        doc["diagnostics"] = {
            "inside": _side_to_json(self.inside),
            "outside": _side_to_json(self.outside),
            "spurious_roots": [
                {"side": s.side, "root": complex_to_pair(s.root), "reason": s.reason}
                for rec in (self.inside, self.outside)
                for s in rec.spurious
            ],
            "fit_residual": self.fit_residual,
            "condition_estimate": self.condition,
        }
        if include_coefficients:
            doc["coefficients"] = _coefficients_to_json(self.coefficients)
        if include_timing:
            doc["timing"] = {"recover_seconds": self.elapsed_seconds}
        return doc


def _side_to_json(side: SideRecovery) -> dict:
    return {
        "chosen_d": int(side.rank.chosen_d),
        "eps": float(side.rank.eps),
        "saturated": bool(side.rank.saturated),
        "singular_values": [float(s) for s in side.rank.singular_values],
        "poles_t": [complex_to_pair(t) for t in side.t_poles],
    }


def _coefficients_to_json(coeffs: FourierCoeffs) -> dict:
    def side(arr):
        if coeffs.is_matrix:
            return [[[complex_to_pair(v) for v in row] for row in mat] for mat in arr]
        return [complex_to_pair(v) for v in arr]

    return {"max_order": coeffs.max_order, "neg": side(coeffs.neg), "pos": side(coeffs.pos)}


def recover(samples: SampleSet, config: RecoveryConfig) -> RecoveryResult:
    """Run the full chain: coefficients -> per-side Prony -> map back -> residues."""
    if samples.access != config.access:
        raise ValueError(f"samples are {samples.access!r} but the config says {config.access!r}")
    if samples.is_matrix != config.matrix:
        raise ValueError("matrix flag does not match the sample values")
    started = time.perf_counter()

    if config.access == RANDOM_ACCESS:
        coeffs = fourier_from_circle(samples, config.max_order)
    else:
        coeffs = fourier_from_matsubara(samples, config.cfg, config.max_order)

    eps = config.effective_eps(samples.nb or 1)
    common = dict(d_max=config.d_max, l=config.l, eps=eps, real_mode=config.real_mode)
    inside = recover_side(coeffs, "inside", config.cfg, **common)
    outside = recover_side(coeffs, "outside", config.cfg, **common)

    poles_parts = []
    for side in (inside, outside):
        if side.t_poles.size:
            mapped = np.atleast_1d(t_to_z(side.t_poles, config.cfg))
            order = np.lexsort((mapped.imag, mapped.real))
            poles_parts.append(mapped[order])
    poles = (
        np.concatenate(poles_parts) if poles_parts else np.empty(0, dtype=np.complex128)
    )

    factors = None
    quality = None
    if poles.size == 0:
        nb = samples.nb
        residues = (
            np.empty((0, nb, nb), dtype=np.complex128) if config.matrix else np.empty(0, np.complex128)
        )
        fit_residual = None
        condition = None
    elif config.matrix:
        fit = solve_residues_matrix(poles, samples)
        residues, fit_residual, condition = fit.residues, fit.residual_norm, fit.condition
        if config.rank1:
            extracted = [rank1_extract(r) for r in residues]
            factors = np.array([v for v, _ in extracted])
            quality = np.array([q for _, q in extracted])
    else:
        fit = solve_residues(poles, samples, real_mode=config.real_mode)
        residues, fit_residual, condition = fit.residues, fit.residual_norm, fit.condition

    return RecoveryResult(
        poles=poles,
        residues=residues,
        inside=inside,
        outside=outside,
        fit_residual=fit_residual,
        condition=condition,
        config=config,
        coefficients=coeffs,
        factors=factors,
        factor_quality=quality,
        elapsed_seconds=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class MatchedPair:
    true_index: int
    recovered_index: int
    distance: float
    residue_error: float


@dataclass(frozen=True)
class MatchReport:
    """One-to-one partial assignment between true and recovered poles."""

    pairs: tuple
    unmatched_true: tuple
    unmatched_recovered: tuple
    max_matched_error: Optional[float]
    mean_matched_error: Optional[float]
    cap: float

    @property
    def n_matched(self) -> int:
        return len(self.pairs)

    def distance_for_true(self, index: int) -> Optional[float]:
        for pair in self.pairs:
            if pair.true_index == index:
                return pair.distance
        return None

    def to_json_dict(self) -> dict:
        return {
            "pairs": [
                {
                    "true_index": p.true_index,
                    "recovered_index": p.recovered_index,
                    "distance": p.distance,
                    "residue_error": p.residue_error,
                }
                for p in self.pairs
            ],
            "unmatched_true": list(self.unmatched_true),
            "unmatched_recovered": list(self.unmatched_recovered),
            "max_matched_error": self.max_matched_error,
            "mean_matched_error": self.mean_matched_error,
            "cap": self.cap,
        }


def match_poles(
    truth: Union[PoleModel, MatrixPoleModel], result: RecoveryResult
) -> MatchReport:
    """Optimal assignment on the pole distance matrix, with a distance cap.

    Pairs farther apart than cap = (b - a)/4 are counted as unmatched on both
    sides rather than matched badly.
    """
    cfg = result.config.cfg
    cap = MATCH_CAP_FACTOR * (cfg.b - cfg.a)
    true_poles = truth.poles
    rec_poles = result.poles

    if true_poles.size == 0 or rec_poles.size == 0:
        return MatchReport(
            pairs=(),
            unmatched_true=tuple(range(true_poles.size)),
            unmatched_recovered=tuple(range(rec_poles.size)),
            max_matched_error=None,
            mean_matched_error=None,
            cap=cap,
        )

    cost = np.abs(true_poles[:, None] - rec_poles[None, :])
    rows, cols = linear_sum_assignment(cost)

    matrix_truth = isinstance(truth, MatrixPoleModel)
    pairs = []
    matched_true = set()
    matched_rec = set()
    for i, j in zip(rows, cols):
        distance = float(cost[i, j])
        if distance > cap:
            continue
        if matrix_truth:
            res_err = float(np.linalg.norm(result.residues[j] - truth.residues[i]))
        else:
            res_err = float(abs(result.residues[j] - truth.residues[i]))
        pairs.append(MatchedPair(int(i), int(j), distance, res_err))
        matched_true.add(int(i))
        matched_rec.add(int(j))

    distances = [p.distance for p in pairs]
    return MatchReport(
        pairs=tuple(pairs),
        unmatched_true=tuple(i for i in range(true_poles.size) if i not in matched_true),
        unmatched_recovered=tuple(j for j in range(rec_poles.size) if j not in matched_rec),
        max_matched_error=max(distances) if distances else None,
        mean_matched_error=float(np.mean(distances)) if distances else None,
        cap=cap,
    )
