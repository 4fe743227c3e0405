"""Uniform radial grids, quadrature weights, and radial field containers.

Radially symmetric integrals over R^n reduce to one-dimensional integrals
against the surface measure omega_n * r^(n-1) dr. All quadrature in the
package is composite trapezoid on these grids; the r^(n-1) factor zeroes
the origin weight for n >= 2, and omega_1 = 2 accounts for the two half
lines in one dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

MAX_DIM = 8


def unit_sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim: 2 pi^(n/2) / Gamma(n/2)."""
    if not 1 <= dim <= MAX_DIM:
        raise ConfigError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


@dataclass(frozen=True)
class RadialGrid:
    """Nodes r_i = i*dr with trapezoid weights carrying the surface measure."""

    dr: float
    count: int
    dim: int
    r: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dr <= 0.0:
            raise ConfigError(f"dr must be positive, got {self.dr}")
        if self.count < 2:
            raise ConfigError(f"grid needs at least 2 nodes, got {self.count}")
        if not 1 <= self.dim <= MAX_DIM:
            raise ConfigError(f"dimension must be in 1..{MAX_DIM}, got {self.dim}")
        r = self.dr * np.arange(self.count, dtype=float)
        coeff = np.ones(self.count)
        coeff[0] = coeff[-1] = 0.5
        w = unit_sphere_area(self.dim) * r ** (self.dim - 1) * self.dr * coeff
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "weights", w)

    @property
    def r_max(self) -> float:
        return self.dr * (self.count - 1)

    def index_of(self, radius: float) -> int:
        """Largest node index with r_i <= radius (clamped to the grid)."""
        return min(self.count - 1, max(0, int(math.floor(radius / self.dr + 1e-12))))


@dataclass(frozen=True)
class RadialProfile:
    """Samples of a radial function on a grid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise ConfigError(
                f"profile has {values.shape} values for a {self.grid.count}-node grid"
            )
        if not np.all(np.isfinite(values)):
            raise ConfigError("profile values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: RadialGrid, fn) -> "RadialProfile":
        return cls(grid, np.asarray(fn(grid.r), dtype=float))

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "RadialProfile":
        return cls(grid, np.zeros(grid.count))


def radial_laplacian(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Second-order radial Laplacian u_rr + (n-1)/r u_r on grid nodes.

    The origin uses the removable-singularity rule 2n(u_1 - u_0)/dr^2; the
    last node is treated with a zero ghost value beyond it, so fields must
    vanish near the end of the array for the result to be meaningful there.
    Arrays shorter than the grid are evaluated on the leading nodes only.
    """
    u = np.asarray(values, dtype=float)
    k = len(u)
    if k < 2 or k > grid.count:
        raise ConfigError(f"need between 2 and {grid.count} values, got {k}")
    n = grid.dim
    dr = grid.dr
    lap = np.empty_like(u)
    lap[0] = 2.0 * n * (u[1] - u[0]) / dr**2
    right = np.empty_like(u[1:])
    right[:-1] = u[2:]
    right[-1] = 0.0
    left = u[:-1]
    mid = u[1:]
    lap[1:] = (right - 2.0 * mid + left) / dr**2
    lap[1:] += (n - 1) / grid.r[1:k] * (right - left) / (2.0 * dr)
    return lap
