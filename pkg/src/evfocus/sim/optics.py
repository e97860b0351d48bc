"""Thin-lens defocus model and Gaussian point-spread blur."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d
from scipy.special import erf

DAVIS346_PITCH_UM = 18.5


@dataclass(frozen=True)
class OpticsConfig:
    """Lens and sensor geometry, all lengths in micrometres.

    ``v0`` is the in-focus image distance; when omitted it is derived from
    the thin-lens equation.
    """

    f: float = 35_000.0
    u: float = 1_000_000.0
    D: float = 25_000.0
    pixel_pitch: float = DAVIS346_PITCH_UM
    v0: float | None = None

    def __post_init__(self):
        if not (self.u > self.f > 0):
            raise ValueError(f"need object distance > focal length > 0 (u={self.u}, f={self.f})")
        if self.D <= 0 or self.pixel_pitch <= 0:
            raise ValueError("aperture and pixel pitch must be positive")
        ideal = 1.0 / (1.0 / self.f - 1.0 / self.u)
        if self.v0 is None:
            object.__setattr__(self, "v0", ideal)
        elif abs(self.v0 - ideal) > 1e-6 * ideal:
            raise ValueError(f"v0={self.v0} disagrees with the thin-lens value {ideal:.6f}")

    @classmethod
    def from_f_number(cls, f: float, f_number: float, u: float, pixel_pitch: float = DAVIS346_PITCH_UM):
        return cls(f=f, u=u, D=f / f_number, pixel_pitch=pixel_pitch)

    @property
    def px_per_um(self) -> float:
        return 1.0 / self.pixel_pitch

    def blur_sigma_px(self, dv):
        """Gaussian PSF width in pixels for defocus ``dv`` (um)."""
        return blur_radius(dv, self.v0, self.D) * self.px_per_um


def blur_radius(dv, v0: float, D: float):
    """Geometric blur-circle radius |dv| * D / (2 v0), in the units of ``dv``."""
    if v0 <= 0:
        raise ValueError(f"image distance must be positive, got {v0}")
    return np.abs(dv) * D / (2.0 * v0)


def gaussian_kernel(a: float) -> np.ndarray:
    """Gaussian of width ``a`` integrated over each pixel, cut at ``ceil(4a)``, unit sum."""
    radius = math.ceil(4.0 * a)
    edges = (np.arange(-radius, radius + 2, dtype=np.float64) - 0.5) / (a * math.sqrt(2.0))
    k = np.diff(erf(edges))
    return k / k.sum()


def gaussian_blur(image: np.ndarray, a: float) -> np.ndarray:
    """Blur with an isotropic Gaussian of width ``a`` pixels, replicate edges.

    The 2-D kernel is the outer product of two unit-sum 1-D kernels cut at
    ``ceil(4a)``, so it is itself unit-sum.
    """
    if a < 0:
        raise ValueError(f"blur width must be >= 0, got {a}")
    img = np.asarray(image, dtype=np.float64)
    if a == 0:
        return img.copy()
    k = gaussian_kernel(a)
    out = correlate1d(img, k, axis=0, mode="nearest")
    return correlate1d(out, k, axis=1, mode="nearest")
