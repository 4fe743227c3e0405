"""Gaussian heat kernel on R^n and the radial quadrature built around it.

Everything here reduces n-dimensional integrals of radial integrands to the
half line. Gaussian-weighted moments use the grid's trapezoid weights; the
kernel-kernel convolution is a direct two-dimensional quadrature in radius
and polar angle, with the angle handled by a Gauss rule matched to the
Gegenbauer weight sin^(n-2)(theta). Spectral transforms are deliberately
avoided: dimensions vary, grids are modest, and correctness wins over speed.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc

from .errors import ConfigError
from .grids import MAX_DIM, RadialGrid, RadialProfile, radial_laplacian, unit_sphere_area

WEIGHT_FLOOR = 1e-16

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class KernelPoint:
    """Evaluation point (t, r) for the kernel in dimension dim."""

    t: float
    r: float
    dim: int

    def __post_init__(self):
        if self.t <= 0.0:
            raise ConfigError(f"kernel time must be positive, got {self.t}")
        if self.r < 0.0:
            raise ConfigError(f"radius must be nonnegative, got {self.r}")
        if not 1 <= self.dim <= MAX_DIM:
            raise ConfigError(f"dimension must be in 1..{MAX_DIM}, got {self.dim}")


def kernel_values(t: float, r, dim: int):
    """(4 pi t)^(-n/2) exp(-r^2 / 4t), vectorized over r.

    Evaluated in the self-similar form t^(-n/2) K(r/sqrt(t)) so that the
    scaling identity holds to a couple of ulps rather than drifting with
    the magnitude of the exponent.
    """
    if t <= 0.0:
        raise ConfigError(f"kernel time must be positive, got {t}")
    q = np.asarray(r, dtype=float) / math.sqrt(t)
    return t ** (-dim / 2.0) * (FOUR_PI ** (-dim / 2.0) * np.exp(-0.25 * q * q))


def eval_kernel(point: KernelPoint) -> float:
    """Kernel density at a validated point."""
    return float(kernel_values(point.t, point.r, point.dim))


def kernel_profile(t: float, grid: RadialGrid) -> RadialProfile:
    return RadialProfile(grid, kernel_values(t, grid.r, grid.dim))


def truncation_radius(t: float, weight_floor: float = WEIGHT_FLOOR) -> float:
    """Radius beyond which exp(-r^2/4t) drops below weight_floor."""
    return 2.0 * math.sqrt(t * math.log(1.0 / weight_floor))


def make_kernel_grid(t: float, dim: int, rel_dr: float = 2e-4) -> RadialGrid:
    """Grid resolving the kernel at time t: spacing and extent scale with sqrt(t)."""
    dr = rel_dr * math.sqrt(t)
    count = int(math.ceil(truncation_radius(t) / dr)) + 2
    return RadialGrid(dr=dr, count=count, dim=dim)


def kernel_mass(t: float, dim: int, grid: RadialGrid) -> tuple[float, float]:
    """Quadrature of the kernel over R^n, with the exact truncated tail mass.

    Returns (mass, truncation_error). The tail beyond the grid is the upper
    incomplete gamma Q(n/2, r_max^2/4t); when the grid extends past
    truncation_radius(t) it is below double-precision noise, otherwise it
    reports how much mass the grid cannot see.
    """
    if grid.dim != dim:
        raise ConfigError(f"grid dimension {grid.dim} does not match dim={dim}")
    mass = float(grid.weights @ kernel_values(t, grid.r, dim))
    tail = float(gammaincc(dim / 2.0, grid.r_max**2 / (4.0 * t)))
    return mass, tail


def weighted_moment(w: RadialProfile, s: float, m: int) -> float:
    """Integral of exp(-|x|^2/4s) |x|^m w(|x|) over R^n by radial quadrature."""
    if s <= 0.0:
        raise ConfigError(f"scale must be positive, got {s}")
    if m < 0 or int(m) != m:
        raise ConfigError(f"moment order must be a nonnegative integer, got {m}")
    return moment_on_grid(w.values, w.grid, s, m)


def moment_on_grid(values: np.ndarray, grid: RadialGrid, s: float, m: int) -> float:
    """weighted_moment for a raw sample array; short arrays mean zero tails."""
    k = len(values)
    r = grid.r[:k]
    integrand = np.exp(-r * r / (4.0 * s)) * values
    if m:
        integrand = integrand * r**m
    if k == grid.count:
        return float(grid.weights @ integrand)
    # interior truncation: the dropped trapezoid half-weight sits on a zero
    w = grid.weights[:k].copy()
    w[-1] *= 2.0
    return float(w @ integrand)


def moment_error_estimate(values: np.ndarray, grid: RadialGrid, s: float, m: int) -> float:
    """Richardson estimate of the trapezoid error of moment_on_grid.

    Re-evaluates the moment on the stride-2 subsample; for a second-order
    rule the difference overestimates the fine-grid error by a factor 3.
    """
    k = len(values)
    coarse_vals = values[0:k:2]
    coarse = RadialGrid(dr=2.0 * grid.dr, count=(grid.count + 1) // 2, dim=grid.dim)
    fine = moment_on_grid(values, grid, s, m)
    half = moment_on_grid(coarse_vals, coarse, s, m)
    return abs(fine - half) / 3.0


@lru_cache(maxsize=32)
def gegenbauer_rule(dim: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_{-1}^{1} g(x) (1-x^2)^((n-3)/2) dx.

    x = cos(theta) turns the polar-angle integral with weight sin^(n-2)
    into this form. Half-integer exponents ride on Chebyshev rules of the
    first or second kind, integer exponents on Gauss-Legendre, with any
    leftover (1-x^2) powers folded into the weights.
    """
    if dim < 2:
        raise ConfigError("angular rule needs dim >= 2")
    if dim == 2:
        k = np.arange(1, count + 1)
        x = np.cos((2 * k - 1) * math.pi / (2 * count))
        w = np.full(count, math.pi / count)
    elif dim % 2 == 0:
        k = np.arange(1, count + 1)
        theta = k * math.pi / (count + 1)
        x = np.cos(theta)
        w = math.pi / (count + 1) * np.sin(theta) ** 2
        w = w * (1.0 - x * x) ** ((dim - 4) / 2.0)
    else:
        x, w = np.polynomial.legendre.leggauss(count)
        if dim > 3:
            w = w * (1.0 - x * x) ** ((dim - 3) / 2.0)
    return x, w


def convolve_with_kernel(w: RadialProfile, t: float, n_theta: int = 128) -> RadialProfile:
    """n-dimensional convolution of the kernel at time t with a radial w.

    Both factors are radial, so the integral collapses to radius x angle.
    The exponent -(r^2 + rho^2 - 2 r rho x)/4t is assembled before the
    exponential; it is never positive, so the quadrature cannot overflow
    however far the grid extends.
    """
    if t <= 0.0:
        raise ConfigError(f"kernel time must be positive, got {t}")
    grid = w.grid
    if t < grid.dr**2:
        warnings.warn(
            f"kernel width sqrt(2t)={math.sqrt(2 * t):.3g} is below the grid "
            f"spacing {grid.dr:.3g}; convolution is underresolved",
            stacklevel=2,
        )
    nz = np.nonzero(w.values)[0]
    if len(nz) == 0:
        return RadialProfile.zeros(grid)
    jmax = min(int(nz[-1]) + 2, grid.count)  # one zero node beyond the support
    rho = grid.r[:jmax]
    coeff = np.ones(jmax)
    coeff[0] = coeff[-1] = 0.5
    radial_w = coeff * grid.dr * rho ** (grid.dim - 1) * w.values[:jmax]

    n = grid.dim
    if n == 1:
        diff = kernel_values(t, np.abs(grid.r[:, None] - rho[None, :]), 1)
        summ = kernel_values(t, grid.r[:, None] + rho[None, :], 1)
        out = (diff + summ) @ radial_w
        return RadialProfile(grid, out)

    x, gw = gegenbauer_rule(n, n_theta)
    base = -(grid.r[:, None] ** 2 + rho[None, :] ** 2) / (4.0 * t)
    cross = np.outer(grid.r, rho) / (2.0 * t)
    acc = np.zeros((grid.count, jmax))
    for xk, wk in zip(x, gw):
        acc += wk * np.exp(base + xk * cross)
    pref = (FOUR_PI * t) ** (-n / 2.0) * unit_sphere_area(n - 1)
    return RadialProfile(grid, pref * (acc @ radial_w))


def semigroup_residual(t: float, s: float, grid: RadialGrid, n_theta: int = 128) -> float:
    """Max-norm gap between convolving two kernels and the kernel at t+s."""
    if t <= 0.0 or s <= 0.0:
        raise ConfigError("both kernel times must be positive")
    conv = convolve_with_kernel(kernel_profile(s, grid), t, n_theta=n_theta)
    exact = kernel_values(t + s, grid.r, grid.dim)
    return float(np.max(np.abs(conv.values - exact)))


def heat_residual(t: float, grid: RadialGrid) -> float:
    """Max norm of dE/dt - Lap_h E with the time derivative taken exactly.

    Isolates the spatial discretization error of the radial Laplacian, so
    the residual decays at second order in the grid spacing.
    """
    if t <= 0.0:
        raise ConfigError(f"kernel time must be positive, got {t}")
    vals = kernel_values(t, grid.r, grid.dim)
    dt_exact = vals * (grid.r**2 / (4.0 * t * t) - grid.dim / (2.0 * t))
    lap = radial_laplacian(vals, grid)
    return float(np.max(np.abs(dt_exact[:-1] - lap[:-1])))
