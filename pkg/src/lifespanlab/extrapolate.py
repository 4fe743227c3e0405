"""Blow-up time extrapolation shared by the PDE and ODE integrators.

A quantity following the self-similar rate M ~ c (T - t)^(-1/q) has
M^(-q) vanishing linearly at T, so the root of a straight-line fit
through the last few samples of M^(-q) estimates the blow-up time far
more robustly than the time an overflow guard happens to trigger.
"""
from __future__ import annotations

import numpy as np


def inverse_power_root(
    ts: np.ndarray, values: np.ndarray, q: float, window: int = 8
) -> tuple[float, float] | None:
    """Root of the linear fit to values^(-q) over the last `window` points.

    Returns (T, relative_fit_residual), or None when the tail is not
    strictly increasing, the fitted slope is not negative, or the root
    falls before the last sample.
    """
    if len(ts) < window:
        return None
    t = np.asarray(ts, dtype=float)[-window:]
    m = np.asarray(values, dtype=float)[-window:]
    if np.any(np.diff(m) <= 0.0):
        return None
    y = m**-q
    slope, intercept = np.polyfit(t, y, 1)
    fitted = slope * t + intercept
    residual = float(np.sqrt(np.mean((y - fitted) ** 2) / np.mean(y**2)))
    if slope >= 0.0:
        return None
    root = float(-intercept / slope)
    if root < t[-1]:
        return None
    return root, residual
