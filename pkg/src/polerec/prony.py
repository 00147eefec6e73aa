"""Pole counting and location from one side of the coefficient sequence.

Each pole inside the unit disk contributes a geometric sequence to the
negative-order coefficients, each exterior pole one to the positive orders
(through its reciprocal).  Stacking shifted windows of one side into a Hankel
matrix therefore gives a matrix whose rank is the pole count on that side and
whose null vector holds the monic-free coefficients of the annihilating
polynomial; its roots are the disk poles (or their reciprocals).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .mobius import DiskPairConfig
from .spectral import FourierCoeffs

__all__ = [
    "HankelSystem",
    "RankDecision",
    "PronyPolynomial",
    "SpuriousRoot",
    "SideRecovery",
    "build_hankel",
    "estimate_rank",
    "prony_polynomial",
    "roots_of",
    "recover_side",
]

SIDES = ("inside", "outside")

# Relative slack on the disk-image radius when filtering recovered locations:
# at small noise a genuine pole near the disk boundary may be perturbed just
# across it, and dropping it would be worse than keeping the slightly-off spot.
MEMBERSHIP_SLACK = 0.1
# A root in real mode counts as real when |Im| / (1 + |root|) is below this.
REAL_PROJECTION_TOL = 1e-6
# Trailing polynomial coefficients below this (times the norm) are trimmed
# before companion-matrix root finding.
TRIM_TOL = 1e-14
# Candidate roots whose fitted contribution to the coefficient sequence falls
# below this fraction of the strongest one are numerical artifacts of the
# overparameterized annihilator, not poles.
CONTRIBUTION_FLOOR = 1e-8


@dataclass(frozen=True)
class HankelSystem:
    """Shifted-window matrix of one coefficient side.

    entry(i, j) = coefficient of order -(i+j+1) (inside) or +(i+j+1)
    (outside); matrix-valued coefficients are column-vectorized, giving
    l*nb*nb rows per window row.
    """

    side: str
    entries: np.ndarray
    d: int
    l: int


@dataclass(frozen=True)
class RankDecision:
    """Numerical rank of the full window matrix: the estimated pole count."""

    singular_values: np.ndarray
    chosen_d: int
    eps: float
    saturated: bool = False


@dataclass(frozen=True)
class PronyPolynomial:
    """Annihilating polynomial p[0] + p[1] t + ... + p[d] t^d, unit Euclidean norm."""

    coefficients: np.ndarray
    side: str


@dataclass(frozen=True)
class SpuriousRoot:
    root: complex
    side: str
    reason: str


@dataclass(frozen=True)
class SideRecovery:
    """Accepted disk-coordinate pole locations plus the audit trail."""

    side: str
    t_poles: np.ndarray
    rank: RankDecision
    spurious: tuple = field(default_factory=tuple)


def _side_sequence(coeffs: FourierCoeffs, side: str, count: int) -> np.ndarray:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if count > coeffs.max_order:
        raise ValueError(
            f"need {count} coefficient orders on the {side} side, have {coeffs.max_order}"
        )
    return coeffs.neg[:count] if side == "inside" else coeffs.pos[:count]


def build_hankel(coeffs: FourierCoeffs, side: str, d: int, l: int) -> HankelSystem:
    """Assemble the l x (d+1) window matrix (rows x nb^2 when matrix-valued)."""
    if d < 1 or l < 1:
        raise ValueError("d and l must be positive")
    if l < d:
        raise ValueError(f"need l >= d, got l={l}, d={d}")
    seq = _side_sequence(coeffs, side, d + l)
    idx = np.arange(l)[:, None] + np.arange(d + 1)[None, :]
    if coeffs.is_matrix:
        nb = coeffs.nb
        # column-vectorize each coefficient matrix (stack its columns)
        vec = seq.transpose(0, 2, 1).reshape(d + l, nb * nb)
        entries = vec[idx].transpose(0, 2, 1).reshape(l * nb * nb, d + 1)
    else:
        entries = seq[idx]
    return HankelSystem(side=side, entries=entries, d=d, l=l)


def estimate_rank(
    coeffs: FourierCoeffs,
    side: str,
    d_max: int,
    l: int,
    eps: float,
    real_mode: bool = False,
) -> RankDecision:
    """Pick the pole count: smallest d with s[d+1]/s[1] below eps, else d_max.

    The singular values come from the full window matrix with d_max columns.
    In real mode only the real part enters, halving the noise the decision
    sees when the underlying coefficients are real.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if l < d_max:
        raise ValueError(f"need l >= d_max, got l={l}, d_max={d_max}")
    entries = build_hankel(coeffs, side, d_max - 1, l).entries
    if real_mode:
        entries = entries.real
    s = np.linalg.svd(entries, compute_uv=False)
    if s[0] == 0.0:
        return RankDecision(singular_values=s, chosen_d=0, eps=eps)
    for d in range(d_max):
        if s[d] / s[0] < eps:
            return RankDecision(singular_values=s, chosen_d=d, eps=eps)
    return RankDecision(singular_values=s, chosen_d=d_max, eps=eps, saturated=True)


def prony_polynomial(
    coeffs: FourierCoeffs,
    side: str,
    d: int,
    l: int,
    real_mode: bool = False,
) -> PronyPolynomial:
    """Null vector of the (d+1)-column window matrix, from its SVD.

    The right singular vector of the smallest singular value annihilates all
    d geometric components simultaneously.  Real mode decomposes the real
    part only, so the coefficients (and ultimately the roots) stay real.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    entries = build_hankel(coeffs, side, d, l).entries
    if real_mode:
        entries = entries.real
    _, _, vh = np.linalg.svd(entries, full_matrices=True)
    coefficients = np.conj(vh[-1])
    return PronyPolynomial(coefficients=coefficients, side=side)


def roots_of(poly: PronyPolynomial) -> np.ndarray:
    """All roots of the polynomial, via the monic companion matrix.

    Trailing coefficients numerically indistinguishable from zero are trimmed
    first: with an overestimated d the null vector legitimately carries a
    vanishing leading term, which would otherwise poison the companion matrix.
    """
    p = np.asarray(poly.coefficients)
    norm = np.linalg.norm(p)
    if norm < 1e-300:
        raise ValueError("degenerate polynomial: all coefficients are numerically zero")
    significant = np.nonzero(np.abs(p) >= TRIM_TOL * norm)[0]
    trimmed = p[: significant[-1] + 1]
    if trimmed.size <= 1:
        return np.empty(0, dtype=np.complex128)
    return np.roots(trimmed[::-1]).astype(np.complex128)


def _sorted_complex(values: np.ndarray) -> np.ndarray:
    if values.size == 0:
        return values
    order = np.lexsort((values.imag, values.real))
    return values[order]


def _contributions(coeffs: FourierCoeffs, side: str, roots: np.ndarray) -> np.ndarray:
    """Energy each root carries in the one-sided coefficient sequence.

    Least-squares fit of the sequence over the roots' geometric columns
    (normalized for conditioning); the contribution of root i is the norm of
    the sequence component it explains.  All roots of the annihilator must
    enter the fit together: leaving one out would smear its energy across
    the others and make noise roots look significant.
    """
    count = coeffs.max_order
    seq = _side_sequence(coeffs, side, count)
    target = seq.reshape(count, -1)
    offset = 0 if side == "inside" else 2  # outside orders start at root**2
    powers = np.arange(count) + offset
    columns = roots[None, :] ** powers[:, None]
    scales = np.linalg.norm(columns, axis=0)
    scales[scales == 0.0] = 1.0
    fitted, *_ = np.linalg.lstsq(columns / scales, target, rcond=None)
    return np.linalg.norm(fitted, axis=1)


def recover_side(
    coeffs: FourierCoeffs,
    side: str,
    cfg: DiskPairConfig,
    *,
    d_max: int,
    l: int,
    eps: float,
    real_mode: bool = False,
) -> SideRecovery:
    """Full one-sided recovery: rank decision, polynomial, filtered roots.

    The annihilating polynomial is taken with a higher degree than the
    detected pole count when the coefficient budget allows: every annihilator
    of the sequence is a polynomial multiple of the minimal one, so the
    genuine roots persist while the surplus roots absorb noise instead of
    polluting them.  The detected count then picks the candidates that carry
    actual weight in the coefficient sequence.

    Roots on the wrong side of the unit circle, complex roots in real mode,
    locations outside the side's disk image (with slack), and candidates with
    negligible fitted weight are reported as spurious rather than raised: at
    high noise partially wrong recoveries are the expected behaviour, not an
    error.
    """
    rank = estimate_rank(coeffs, side, d_max, l, eps, real_mode=real_mode)
    if rank.chosen_d == 0:
        return SideRecovery(side=side, t_poles=np.empty(0, np.complex128), rank=rank)
    degree = min(max(rank.chosen_d, coeffs.max_order - l), l)
    rows = min(l, coeffs.max_order - degree)
    degree = min(degree, rows)
    keep_count = min(rank.chosen_d, degree)
    poly = prony_polynomial(coeffs, side, degree, rows, real_mode=real_mode)
    roots = roots_of(poly)

    spurious: list[SpuriousRoot] = []
    kept_roots: list[complex] = []
    locations: dict[int, complex] = {}
    for idx, raw in enumerate(roots):
        root = complex(raw)
        if abs(root) >= 1.0:
            spurious.append(SpuriousRoot(root, side, "root not inside the unit circle"))
            kept_roots.append(root)
            continue
        if real_mode:
            if abs(root.imag) / (1.0 + abs(root)) < REAL_PROJECTION_TOL:
                root = complex(root.real, 0.0)
            else:
                spurious.append(SpuriousRoot(root, side, "complex root in real mode"))
                kept_roots.append(root)
                continue
        if side == "inside":
            location = root
            member = abs(location) <= cfg.rho_in * (1.0 + MEMBERSHIP_SLACK)
        else:
            if abs(root) < 1e-300:
                spurious.append(SpuriousRoot(root, side, "root at the origin has no reciprocal"))
                kept_roots.append(root)
                continue
            location = 1.0 / root
            member = abs(location) >= cfg.rho_out / (1.0 + MEMBERSHIP_SLACK)
        if not member:
            spurious.append(SpuriousRoot(root, side, "location outside the disk image"))
            kept_roots.append(root)
            continue
        locations[len(kept_roots)] = location
        kept_roots.append(root)

    candidate_idx = sorted(locations)
    if len(candidate_idx) > 1 or len(candidate_idx) > keep_count:
        weights = _contributions(coeffs, side, np.array(kept_roots, dtype=np.complex128))
        floor = CONTRIBUTION_FLOOR * np.max(weights) if weights.size else 0.0
        ranked = sorted(candidate_idx, key=lambda i: weights[i], reverse=True)
        selected = []
        for rank_pos, idx in enumerate(ranked):
            if rank_pos < keep_count and weights[idx] >= floor:
                selected.append(idx)
            else:
                spurious.append(
                    SpuriousRoot(kept_roots[idx], side, "negligible weight in the coefficient fit")
                )
        kept = [locations[i] for i in sorted(selected)]
    else:
        kept = [locations[i] for i in candidate_idx]

    t_poles = _sorted_complex(np.array(kept, dtype=np.complex128))
    return SideRecovery(side=side, t_poles=t_poles, rank=rank, spurious=tuple(spurious))
