"""Deterministic slab attenuation laws used as baselines and limits."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FluctuationWarning, NegativeDepth


@dataclass(frozen=True)
class MediumSpec:
    """Slab medium parameters.

    sigma_a : mean absorption coefficient, 1/cm, >= 0.
    sigma_s : scattering coefficient, 1/cm, >= 0.
    alpha   : relative magnitude of absorption fluctuations, >= 0.
    i0      : incident beam intensity, W/cm^2, > 0.

    alpha >= 1 is allowed but emits a FluctuationWarning: the model is a
    small-fluctuation expansion about the mean coefficient.
    """

    sigma_a: float
    sigma_s: float = 0.0
    alpha: float = 0.0
    i0: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma_a < 0:
            raise ValueError(f"sigma_a must be >= 0, got {self.sigma_a}")
        if self.sigma_s < 0:
            raise ValueError(f"sigma_s must be >= 0, got {self.sigma_s}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.i0 > 0:
            raise ValueError(f"i0 must be > 0, got {self.i0}")
        if self.alpha >= 1:
            warnings.warn(
                f"alpha = {self.alpha} is outside the small-fluctuation regime",
                FluctuationWarning,
                stacklevel=2,
            )

    @property
    def sigma_t(self) -> float:
        """Total attenuation coefficient sigma_a + sigma_s."""
        return self.sigma_a + self.sigma_s


def _checked_depth(z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise NegativeDepth("depth z must be >= 0")
    return z


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def beer(medium: MediumSpec, z):
    """Pure-absorption exponential decay I0 * exp(-sigma_a * z)."""
    z = _checked_depth(z)
    return _scalar_or_array(medium.i0 * np.exp(-medium.sigma_a * z))


def beer_lambert(medium: MediumSpec, z):
    """Decay with the total coefficient, I0 * exp(-(sigma_a + sigma_s) * z)."""
    z = _checked_depth(z)
    return _scalar_or_array(medium.i0 * np.exp(-medium.sigma_t * z))


def beer_variable(
    profile: Callable[[float], float],
    i0: float,
    z: float,
    quad_points: int = 513,
) -> float:
    """Attenuation under a depth-dependent coefficient.

    Returns ``i0 * exp(-integral of profile over [0, z])`` with the
    integral taken by the composite trapezoid rule on quad_points
    abscissae (second-order accurate, exact for constant profiles).
    """
    if z < 0:
        raise NegativeDepth("depth z must be >= 0")
    if quad_points < 2:
        raise ValueError(f"quad_points must be >= 2, got {quad_points}")
    zs = np.linspace(0.0, z, quad_points)
    vals = np.array([float(profile(t)) for t in zs])
    return i0 * math.exp(-float(np.trapezoid(vals, zs)))
