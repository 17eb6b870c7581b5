"""Stationary Gaussian random fields on a uniform 1-D slab grid.

The field G(z) is zero-mean with two-point covariance
``C * exp(-|z1 - z2|**kappa / zeta**kappa)``.  Paths are drawn by dense
Cholesky factorization of the grid covariance (exact for any kernel and
grid at the sizes used here), and the running integral of each path is
accumulated with the composite trapezoid rule, matching the Riemann-sum
definition of the stochastic integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FactorizationFailure, OutOfDomain

# Diagonal jitter ladder for the Cholesky factorization, relative to the
# kernel amplitude: start at 1e-12*C, multiply by 10 on failure, stop at
# 1e-6*C.
_JITTER_EXPONENTS = range(-12, -5)


@dataclass(frozen=True)
class CorrelationKernel:
    """Two-point covariance ``C * exp(-|dz|^kappa / zeta^kappa)``.

    Parameters
    ----------
    amplitude : float
        Variance C at zero separation, dimensionless, > 0.
    correlation_length : float
        Decay scale zeta in cm, > 0.  As zeta -> 0 the off-diagonal
        covariance vanishes and the field degenerates toward white noise.
    exponent : float
        Shape exponent kappa.  1 gives colored (Ornstein-Uhlenbeck-like)
        noise, 2 the squared-exponential (Bargmann-Fock) field, values
        above 2 a super-Gaussian correlation.  Exponents below 1 are
        rejected because they break positive-definiteness on fine grids.
        Note the kappa=1 kernel is not mean-square differentiable at
        coincident points; only kappa=2 is genuinely smooth there.
    """

    amplitude: float
    correlation_length: float
    exponent: float = 2.0

    def __post_init__(self) -> None:
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be > 0, got {self.amplitude}")
        if not self.correlation_length > 0:
            raise ValueError(
                f"correlation_length must be > 0, got {self.correlation_length}"
            )
        if not self.exponent >= 1:
            raise ValueError(
                f"exponent must be >= 1, got {self.exponent} "
                "(kernels below 1 are not positive definite on fine grids)"
            )

    def evaluate(self, z1, z2):
        """Covariance between planes z1 and z2 (vectorized, total function).

        Depends only on |z1 - z2|, so it is symmetric and invariant under
        common shifts of both arguments; coincident points return exactly
        the amplitude.
        """
        sep = np.abs(np.asarray(z1, dtype=float) - np.asarray(z2, dtype=float))
        zeta = self.correlation_length
        out = self.amplitude * np.exp(-(sep**self.exponent) / zeta**self.exponent)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Grid:
    """Uniform abscissae 0 = Z_0 < Z_1 < ... < Z_{n-1} = L."""

    length: float
    n_points: int

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ValueError(f"length must be > 0, got {self.length}")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return self.length / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_points)

    @classmethod
    def for_kernel(
        cls, length: float, kernel: CorrelationKernel, points_per_length: int = 10
    ) -> "Grid":
        """Grid fine enough to resolve the correlation length.

        Chooses n_points so the spacing is at most
        ``correlation_length / points_per_length``.  Override by
        constructing a Grid directly when a specific resolution is needed.
        """
        target = kernel.correlation_length / points_per_length
        n = max(2, math.ceil(length / target) + 1)
        return cls(length, n)


def _trapezoid_cumulative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Running trapezoid integral along the last axis, starting at 0."""
    values = np.asarray(values, dtype=float)
    segments = 0.5 * spacing * (values[..., 1:] + values[..., :-1])
    out = np.zeros(values.shape)
    np.cumsum(segments, axis=-1, out=out[..., 1:])
    return out


@dataclass(frozen=True)
class FieldPath:
    """One field realization together with its running integral.

    ``values[q]`` is the field at Z_q and ``cumulative_integral[q]`` is
    the trapezoid accumulation of the values from 0 to Z_q (units cm,
    the field itself being dimensionless).  The first entry of the
    cumulative integral is exactly 0.
    """

    grid: Grid
    values: np.ndarray
    cumulative_integral: np.ndarray

    @classmethod
    def from_values(cls, grid: Grid, values) -> "FieldPath":
        """Build a path from raw grid values (synthetic or sampled)."""
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ValueError(
                f"values shape {values.shape} does not match grid ({grid.n_points},)"
            )
        return cls(grid, values, _trapezoid_cumulative(values, grid.spacing))


def covariance_matrix(kernel: CorrelationKernel, grid: Grid) -> np.ndarray:
    """Grid covariance M[i, j] = kernel.evaluate(Z_i, Z_j).

    Symmetric with diagonal equal to the amplitude; positive semidefinite
    up to rounding for exponents in [1, 2].
    """
    z = grid.points
    return kernel.evaluate(z[:, None], z[None, :])


def _cholesky_with_jitter(matrix: np.ndarray, amplitude: float):
    """Factor ``matrix + jitter*I`` climbing the jitter ladder.

    Returns the lower-triangular factor and the jitter that succeeded.
    Raises FactorizationFailure once the ladder is exhausted.
    """
    eye = np.eye(matrix.shape[0])
    for expo in _JITTER_EXPONENTS:
        jitter = amplitude * 10.0**expo
        try:
            return np.linalg.cholesky(matrix + jitter * eye), jitter
        except np.linalg.LinAlgError:
            continue
    raise FactorizationFailure(
        "covariance is not positive definite even at maximum jitter "
        f"({amplitude * 10.0 ** _JITTER_EXPONENTS[-1]:.1e}); "
        "the kernel/grid pair is invalid (shape exponents above 2 are not "
        "positive semidefinite)"
    )


class FieldSampler:
    """Draws field paths for one (kernel, grid) pair.

    The covariance factor is computed once at construction; sampling is
    then pure in the seed, so a single sampler can be shared read-only
    across concurrent workers.  Ensemble paths are seeded by index from
    a master seed, which makes results independent of execution order.
    """

    def __init__(self, kernel: CorrelationKernel, grid: Grid):
        self.kernel = kernel
        self.grid = grid
        self.covariance = covariance_matrix(kernel, grid)
        self.factor, self.jitter = _cholesky_with_jitter(
            self.covariance, kernel.amplitude
        )

    def sample(self, seed) -> FieldPath:
        """One path; deterministic for a fixed (kernel, grid, seed)."""
        rng = np.random.default_rng(seed)
        values = self.factor @ rng.standard_normal(self.grid.n_points)
        return FieldPath(
            self.grid, values, _trapezoid_cumulative(values, self.grid.spacing)
        )

    def sample_block(self, master_seed: int, start: int, count: int) -> np.ndarray:
        """Values for ensemble paths [start, start+count) as a (count, n) array.

        Path ``i`` always consumes the generator seeded by
        ``SeedSequence(master_seed, spawn_key=(i,))`` and is transformed by
        one fixed-shape matrix-vector product, so any partition of the
        ensemble into blocks reproduces bit-identical paths.
        """
        n = self.grid.n_points
        values = np.empty((count, n))
        for row in range(count):
            seq = np.random.SeedSequence(
                entropy=master_seed, spawn_key=(start + row,)
            )
            values[row] = self.factor @ np.random.default_rng(seq).standard_normal(n)
        return values

    def sample_indexed(self, master_seed: int, index: int) -> FieldPath:
        """Ensemble path ``index``, identical to the block-sampled row."""
        values = self.sample_block(master_seed, index, 1)[0]
        return FieldPath(
            self.grid, values, _trapezoid_cumulative(values, self.grid.spacing)
        )


def sample_path(kernel: CorrelationKernel, grid: Grid, seed) -> FieldPath:
    """Convenience one-shot sampler (factorizes the covariance each call)."""
    return FieldSampler(kernel, grid).sample(seed)


def stochastic_integral(path: FieldPath, z: float) -> float:
    """Integral of the field from 0 to z, linear between grid nodes.

    Exactly 0 at z = 0.  Raises OutOfDomain for z outside [0, L].
    """
    grid = path.grid
    if z < 0 or z > grid.length:
        raise OutOfDomain(f"z = {z} outside the slab [0, {grid.length}]")
    return float(np.interp(z, grid.points, path.cumulative_integral))
