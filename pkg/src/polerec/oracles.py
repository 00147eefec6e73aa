"""Slow brute-force references used by the test suite to validate the pipeline.

Nothing here shares code with the production quadratures: coefficients come
from dense trapezoid sums with the model evaluated point by point, so any
disagreement localizes a bug instead of hiding it.  Not for production use.
"""

from __future__ import annotations

import numpy as np

from .mobius import DiskPairConfig, t_to_z, z_to_t
from .models import MatrixPoleModel, PoleModel, evaluate, evaluate_matrix

__all__ = ["contour_coeff_oracle", "tplane_model_oracle"]


def contour_coeff_oracle(model, cfg: DiskPairConfig, k: int, n_quad: int = 16384):
    """Coefficient of order k by dense trapezoid quadrature on the unit circle.

    ``model`` may be a scalar or matrix pole model, or any plain callable of
    z.  Uses a half-step-offset grid so the node t = 1 (the image of
    infinity) never appears; the offset leaves the trapezoid rule's spectral
    accuracy untouched on periodic integrands.
    """
    if n_quad < 8192:
        raise ValueError("n_quad must be at least 8192 for a trustworthy reference")
    theta = 2.0 * np.pi * (np.arange(n_quad) + 0.5) / n_quad
    t = np.exp(1j * theta)
    z = t_to_z(t, cfg)
    if isinstance(model, MatrixPoleModel):
        vals = evaluate_matrix(model, z)
        weights = np.exp(-1j * k * theta)
        return np.tensordot(weights, vals, axes=(0, 0)) / n_quad
    if isinstance(model, PoleModel):
        vals = evaluate(model, z)
    else:
        vals = np.asarray(model(z), dtype=np.complex128)
    return np.mean(vals * np.exp(-1j * k * theta))


def tplane_model_oracle(model: PoleModel, cfg: DiskPairConfig, n_quad: int = 4096):
    """Disk-coordinate pole locations and pole weights of the mapped function.

    Locations are the exact images of the model's poles.  Weights follow the
    w/(tau - t) convention the coefficient formulas use, so each one is the
    negated small-circle contour integral of g(z(t)) around its location
    (the contour gives the 1/(t - tau) coefficient, which has the opposite
    sign).  The circle radius is half the distance to the nearest other
    location or to the unit circle, whichever is closer.
    """
    taus = np.atleast_1d(z_to_t(model.poles, cfg))
    weights = np.empty_like(taus)
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    ring = np.exp(1j * theta)
    for j, tau in enumerate(taus):
        others = np.delete(taus, j)
        gap_to_circle = abs(abs(tau) - 1.0)
        nearest = np.min(np.abs(others - tau)) if others.size else np.inf
        radius = 0.5 * min(nearest, gap_to_circle)
        circle = tau + radius * ring
        vals = evaluate(model, t_to_z(circle, cfg))
        # (1/2*pi*i) * contour integral via dt = i * radius * e^{i*theta} d(theta)
        weights[j] = -np.mean(vals * radius * ring)
    return taus, weights
