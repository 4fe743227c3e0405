"""Shared result records: (epsilon, lifespan) observations and fit outputs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class LifespanRecord:
    """One sweep observation; T is None unless the run blew up."""

    epsilon: float
    T: float | None
    status: str
    source: str  # "pde" or "ode"
    dim: float
    p: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.T is not None and self.T <= 0.0:
            raise ConfigError(f"lifespan must be positive when present, got {self.T}")


@dataclass(frozen=True)
class FitResult:
    """Fitted scaling law and its diagnostics.

    For the critical law the regression is log T (or log(1+T)) against
    eps^(-2/n), so C is the slope and `exponent` records the abscissa power
    -2/n. For the subcritical law the fit is log-log, C is the prefactor,
    `exponent` the theoretical power, and `fitted_exponent` the measured
    slope to compare against it.
    """

    law: str
    C: float
    offset: float
    exponent: float
    r_squared: float
    residuals: np.ndarray
    fitted_exponent: float | None = None

    def __post_init__(self):
        if self.law not in ("critical", "subcritical"):
            raise ConfigError(f"unknown law {self.law!r}")
        if not -1e-12 <= self.r_squared <= 1.0 + 1e-12:
            raise ConfigError(f"r_squared must lie in [0, 1], got {self.r_squared}")
