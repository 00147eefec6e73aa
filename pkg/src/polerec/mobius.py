"""Fractional-linear change of coordinates between the half-plane and disk pictures.

The map ``t = (z - c) / (z + c)`` with ``c = sqrt(a*b)`` sends the right
half-plane into the open unit disk, the left half-plane to its exterior, and
the imaginary axis onto the unit circle.  The two disks of radius ``(b-a)/2``
centered at ``+-(a+b)/2`` land on the concentric circles ``|t| = rho_in`` and
``|t| = rho_out = 1/rho_in``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["DiskPairConfig", "z_to_t", "t_to_z", "circle_image_radius"]


@dataclass(frozen=True)
class DiskPairConfig:
    """Geometry of the two pole-bearing disks plus derived map constants.

    The map constant ``c`` and the image radii are computed once here; every
    other module reads them from this object instead of re-deriving them.
    """

    a: float
    b: float
    c: float = field(init=False)
    rho_in: float = field(init=False)
    rho_out: float = field(init=False)
    disk_center: float = field(init=False)  # right disk; the left one is mirrored
    disk_radius: float = field(init=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.a < self.b):
            raise ValueError(f"need 0 < a < b, got a={self.a!r}, b={self.b!r}")
        sa, sb = math.sqrt(self.a), math.sqrt(self.b)
        object.__setattr__(self, "c", sa * sb)
        object.__setattr__(self, "rho_in", (sb - sa) / (sb + sa))
        object.__setattr__(self, "rho_out", (sb + sa) / (sb - sa))
        object.__setattr__(self, "disk_center", 0.5 * (self.a + self.b))
        object.__setattr__(self, "disk_radius", 0.5 * (self.b - self.a))


def z_to_t(z, cfg: DiskPairConfig):
    """Map half-plane coordinates to disk coordinates, ``t = (z-c)/(z+c)``.

    Accepts a scalar or an array.  Raises ``ValueError`` when ``z`` hits the
    map's pole at ``-c`` exactly; quadrature grids are built to avoid it.
    """
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == -cfg.c):
        raise ValueError(f"z = {-cfg.c} is the pole of the forward map")
    t = (z - cfg.c) / (z + cfg.c)
    return t[()]


def t_to_z(t, cfg: DiskPairConfig):
    """Inverse map, ``z = -c (t+1)/(t-1)``.  Rejects ``t = 1`` (image of infinity)."""
    t = np.asarray(t, dtype=np.complex128)
    if np.any(t == 1.0):
        raise ValueError("t = 1 is the image of z = infinity")
    z = -cfg.c * (t + 1.0) / (t - 1.0)
    return z[()]


def circle_image_radius(cfg: DiskPairConfig, side: str) -> float:
    """Radius of the circle the given disk maps onto: ``right`` -> rho_in, ``left`` -> rho_out."""
    if side == "right":
        return cfg.rho_in
    if side == "left":
        return cfg.rho_out
    raise ValueError(f"side must be 'right' or 'left', got {side!r}")
