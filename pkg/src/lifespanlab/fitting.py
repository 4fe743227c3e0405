"""Least-squares fits of the lifespan scaling laws to sweep records.

Critical law: log T regressed on eps^(-2/n) with a free intercept, since
the bound only determines the constant up to the data-dependent prefactor.
Subcritical law: log T on log eps, reporting the fitted exponent next to
the theoretical -1/(1/(p-1) - n/2) rather than constraining it.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .records import FitResult, LifespanRecord

MIN_RECORDS = 3


def _blown_up(records: list[LifespanRecord]) -> list[LifespanRecord]:
    good = [r for r in records if r.status == "BlewUp" and r.T is not None]
    if len(good) < MIN_RECORDS:
        raise InsufficientDataError(
            f"need at least {MIN_RECORDS} blown-up records, have {len(good)}"
        )
    return good


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, np.ndarray]:
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    resid = y - pred
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), float(intercept), r2, resid


def subcritical_exponent(dim: float, p: float) -> float:
    """Theoretical lifespan power -1/(1/(p-1) - n/2); requires p below 1 + 2/n."""
    gap = 1.0 / (p - 1.0) - dim / 2.0
    if gap <= 0.0:
        raise ConfigError(f"p={p} is not subcritical for dimension {dim}")
    return -1.0 / gap


def fit_critical(records: list[LifespanRecord], dim: float, *, use_log1p: bool = False) -> FitResult:
    """OLS of log T (or log(1+T)) against eps^(-2/n)."""
    good = _blown_up(records)
    x = np.array([r.epsilon ** (-2.0 / dim) for r in good])
    y = np.array([math.log1p(r.T) if use_log1p else math.log(r.T) for r in good])
    slope, intercept, r2, resid = _ols(x, y)
    return FitResult(
        law="critical",
        C=slope,
        offset=intercept,
        exponent=-2.0 / dim,
        r_squared=r2,
        residuals=resid,
    )


def fit_subcritical(records: list[LifespanRecord], dim: float, p: float) -> FitResult:
    """Log-log OLS; prefactor exp(offset), fitted exponent vs the theory value."""
    theory = subcritical_exponent(dim, p)
    good = _blown_up(records)
    x = np.array([math.log(r.epsilon) for r in good])
    y = np.array([math.log(r.T) for r in good])
    slope, intercept, r2, resid = _ols(x, y)
    return FitResult(
        law="subcritical",
        C=math.exp(intercept),
        offset=intercept,
        exponent=theory,
        r_squared=r2,
        residuals=resid,
        fitted_exponent=slope,
    )
