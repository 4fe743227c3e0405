"""Blow-up integrator for the damped differential inequality family

    I'' + I' = C0 * I^(1+alpha) / (1+t)^beta,   I(0) > 0, I'(0) >= 0,

taken with equality. Solutions of the inequality blow up no later, so the
equality traces the extremal lifespan of the family, which is the right
object for scaling fits. A first-order mode drops I'' and then has the
separable closed forms used as oracles:

    beta = 1:  T = exp(I0^(-alpha) / (alpha C0)) - 1
    beta < 1:  T = ((1-beta) I0^(-alpha) / (alpha C0) + 1)^(1/(1-beta)) - 1

Integration is classical RK4 with step-doubling error control. Blow-up is
declared at a large threshold and the time extrapolated from the terminal
rate, mirroring the PDE solver's policy: the dominant balance gives
I ~ c (T-t)^(-2/alpha) for the full equation (I'' against the forcing) and
(T-t)^(-1/alpha) in first-order mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, NumericalError
from .extrapolate import inverse_power_root
from .records import LifespanRecord

BLOWUP_THRESHOLD = 1e12
DEFAULT_TOL = 1e-8
FIT_WINDOW = 8


class OdeStatus(str, Enum):
    BLEW_UP = "BlewUp"
    HORIZON_REACHED = "HorizonReached"


@dataclass(frozen=True)
class OdeParams:
    alpha: float
    beta: float
    C0: float
    I0: float
    I0_prime: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigError(f"beta must lie in [0, 1], got {self.beta}")
        if self.C0 <= 0.0:
            raise ConfigError(f"C0 must be positive, got {self.C0}")
        if self.I0 <= 0.0:
            raise ConfigError(f"I0 must be positive, got {self.I0}")
        if self.I0_prime < 0.0:
            raise ConfigError(f"I0_prime must be nonnegative, got {self.I0_prime}")


@dataclass(frozen=True)
class OdeResult:
    status: OdeStatus
    T: float | None
    steps: int
    tolerance_report: dict
    ts: np.ndarray = field(repr=False, compare=False, default=None)
    values: np.ndarray = field(repr=False, compare=False, default=None)


def _rhs(t: float, y: np.ndarray, params: OdeParams, first_order: bool) -> np.ndarray:
    forcing = params.C0 * y[0] ** (1.0 + params.alpha) / (1.0 + t) ** params.beta
    if first_order:
        return np.array([forcing])
    return np.array([y[1], forcing - y[1]])


def _rk4(t, y, h, params, first_order):
    k1 = _rhs(t, y, params, first_order)
    k2 = _rhs(t + 0.5 * h, y + 0.5 * h * k1, params, first_order)
    k3 = _rhs(t + 0.5 * h, y + 0.5 * h * k2, params, first_order)
    k4 = _rhs(t + h, y + h * k3, params, first_order)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    params: OdeParams,
    horizon: float = 1e6,
    tol: float = DEFAULT_TOL,
    *,
    first_order: bool = False,
    threshold: float = BLOWUP_THRESHOLD,
    window: int = FIT_WINDOW,
) -> OdeResult:
    """Adaptive integration until blow-up or the horizon.

    Step doubling: each step is taken whole and as two halves; the
    Richardson difference controls the local error against tol and the
    pair of half steps is kept. Past the threshold the lifespan comes from
    the inverse-power tail fit.
    """
    if horizon <= 0.0:
        raise ConfigError(f"horizon must be positive, got {horizon}")
    if tol <= 0.0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    y = np.array([params.I0]) if first_order else np.array([params.I0, params.I0_prime])
    t = 0.0
    h = min(0.01, horizon / 100.0)
    ts = [0.0]
    vals = [params.I0]
    steps = 0
    min_step = h
    underflow = False
    while t < horizon and y[0] <= threshold:
        h = min(h, horizon - t)
        y_full = _rk4(t, y, h, params, first_order)
        y_mid = _rk4(t, y, 0.5 * h, params, first_order)
        y_half = _rk4(t + 0.5 * h, y_mid, 0.5 * h, params, first_order)
        err = float(np.max(np.abs(y_full - y_half))) / 15.0
        scale = tol * (1.0 + float(np.max(np.abs(y_half))))
        if err <= scale and np.all(np.isfinite(y_half)):
            t += h
            y = y_half
            ts.append(t)
            vals.append(float(y[0]))
            steps += 1
        grow = 0.9 * (scale / err) ** 0.2 if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, grow))
        min_step = min(min_step, h)
        if h < 1e-14 * (1.0 + t):
            underflow = True
            break
    report = {"tol": tol, "min_step": min_step, "steps": steps, "underflow": underflow}
    ts_arr = np.array(ts)
    vals_arr = np.array(vals)
    # An underflow against a steep monotone tail is the singularity itself:
    # for large alpha the rate (T-t)^(-1/alpha) cannot reach the threshold
    # within double precision, so the tail fit takes over.
    hit = y[0] > threshold or (underflow and vals_arr[-1] > 1e3)
    if hit:
        q = params.alpha if first_order else params.alpha / 2.0
        fit = inverse_power_root(ts_arr, vals_arr, q, window=window)
        if fit is not None and fit[1] <= 0.1:
            T, residual = fit
            report["fit_residual"] = residual
            return OdeResult(OdeStatus.BLEW_UP, T, steps, report, ts_arr, vals_arr)
        raise NumericalError("blow-up tail detected but the rate fit failed")
    if underflow:
        raise NumericalError(f"step size underflow at t={t:.6g} before blow-up or horizon")
    return OdeResult(OdeStatus.HORIZON_REACHED, None, steps, report, ts_arr, vals_arr)


def first_order_reference(params: OdeParams) -> float:
    """Exact lifespan of the first-order mode by separation of variables."""
    base = params.I0 ** (-params.alpha) / (params.alpha * params.C0)
    if params.beta == 1.0:
        return math.exp(base) - 1.0
    return ((1.0 - params.beta) * base + 1.0) ** (1.0 / (1.0 - params.beta)) - 1.0


def sweep(
    template: OdeParams,
    epsilons: list[float],
    horizon: float = 1e6,
    tol: float = DEFAULT_TOL,
    *,
    first_order: bool = False,
) -> list[LifespanRecord]:
    """Integrate once per epsilon (played by I0); deterministic epsilon order."""
    records = []
    for eps in sorted(epsilons, reverse=True):
        if eps <= 0.0:
            raise ConfigError(f"epsilon values must be positive, got {eps}")
        params = OdeParams(template.alpha, template.beta, template.C0, eps, template.I0_prime)
        result = integrate(params, horizon, tol, first_order=first_order)
        records.append(
            LifespanRecord(
                epsilon=eps,
                T=result.T,
                status=result.status.value,
                source="ode",
                dim=2.0 / template.alpha,
                p=1.0 + template.alpha,
                meta={"steps": result.steps, "beta": template.beta, "c0": template.C0},
            )
        )
    return records
