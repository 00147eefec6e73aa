"""Two-sided circle-harmonic coefficients of the sampled function.

In disk coordinates the data lives on the unit circle, and the analysis needs
the coefficients

    g_hat[k] = (1/2*pi) * integral_0^{2*pi} g(e^{i*theta}) e^{-i*k*theta} d(theta)

for 0 < |k| <= max_order.  Negative orders carry the unit-disk poles, positive
orders the exterior ones; the k = 0 term is irrelevant to pole recovery and is
never stored.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .mobius import DiskPairConfig
from .sampling import MATSUBARA, RANDOM_ACCESS, SampleSet

__all__ = ["FourierCoeffs", "fourier_from_circle", "fourier_from_matsubara"]


@dataclass(frozen=True)
class FourierCoeffs:
    """One-sided coefficient stacks: neg[i] is order -(i+1), pos[i] is order +(i+1)."""

    max_order: int
    neg: np.ndarray
    pos: np.ndarray
    source: str
    n_s: Optional[int] = None
    n_m: Optional[int] = None
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_order < 1:
            raise ValueError("max_order must be at least 1")
        if self.neg.shape != self.pos.shape or self.neg.shape[0] != self.max_order:
            raise ValueError("neg and pos must both hold max_order coefficients")

    @property
    def is_matrix(self) -> bool:
        return self.neg.ndim == 3

    @property
    def nb(self) -> Optional[int]:
        return self.neg.shape[1] if self.is_matrix else None

    def coefficient(self, k: int):
        """Coefficient of order k; k = 0 is never stored or consumed."""
        if k == 0:
            raise ValueError("the order-0 coefficient is not part of the analysis")
        if abs(k) > self.max_order:
            raise ValueError(f"order {k} exceeds max_order={self.max_order}")
        return self.pos[k - 1] if k > 0 else self.neg[-k - 1]


def fourier_from_circle(samples: SampleSet, max_order: int) -> FourierCoeffs:
    """Coefficients from unit-circle samples via one discrete Fourier transform.

    The equispaced nodes make the trapezoid rule exact up to aliasing, so
    g_hat[k] = (1/n_s) * sum_n values[n] * exp(-2*pi*i*k*n/n_s).  Requires
    n_s >= 2*(max_order + 1) so every requested order is below Nyquist.
    """
    if samples.access != RANDOM_ACCESS:
        raise ValueError("fourier_from_circle needs random-access samples")
    n_s = samples.n_s
    if n_s < 2 * (max_order + 1):
        raise ValueError(f"n_s={n_s} too small for max_order={max_order}; need n_s >= {2 * (max_order + 1)}")
    fhat = np.fft.fft(samples.values, axis=0) / n_s
    pos = fhat[1 : max_order + 1].copy()
    neg = fhat[-1 : -max_order - 1 : -1].copy()
    return FourierCoeffs(max_order=max_order, neg=neg, pos=pos, source=RANDOM_ACCESS, n_s=n_s)


def fourier_from_matsubara(samples: SampleSet, cfg: DiskPairConfig, max_order: int) -> FourierCoeffs:
    """Coefficients from Matsubara samples by trapezoid quadrature in z.

    The circle images of the grid are not equispaced, so the contour integral
    is evaluated in the original variable:

        g_hat[k] ~= (-1/beta) * sum_n g(z_n) * ((z_n-c)/(z_n+c))**(-(k+1))
                                        * 2c / (z_n+c)**2

    truncated to the sampled grid.  The negative power is formed from integer
    powers of t and 1/t only, never through logarithms.  Convergence is fast
    only when a >> pi/beta; a warning is raised otherwise.
    """
    if samples.access != MATSUBARA:
        raise ValueError("fourier_from_matsubara needs Matsubara samples")
    if cfg.a < 10.0 * np.pi / samples.beta:
        warnings.warn(
            f"a={cfg.a} is not large against pi/beta={np.pi / samples.beta:.3g}; "
            "the Matsubara quadrature converges slowly in this regime",
            stacklevel=2,
        )
    values = samples.values
    flat = values.reshape(len(values), -1)
    neg, pos = kernels.matsubara_reduce(flat, samples.points_z, cfg.c, samples.beta, max_order)
    if values.ndim == 3:
        nb = values.shape[1]
        neg = neg.reshape(max_order, nb, nb)
        pos = pos.reshape(max_order, nb, nb)
    else:
        neg = neg.reshape(max_order)
        pos = pos.reshape(max_order)
    return FourierCoeffs(
        max_order=max_order,
        neg=neg,
        pos=pos,
        source=MATSUBARA,
        n_m=samples.n_m,
        beta=samples.beta,
    )
