"""Sweep orchestration: run the PDE or ODE module over an epsilon grid.

Runs are independent and may execute on a small thread pool; aggregation
sorts by epsilon descending, so results are deterministic regardless of
completion order. Failed runs are carried as flagged records instead of
aborting the sweep.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ConfigError, NumericalError
from .grids import RadialProfile
from .odeblowup import OdeParams, sweep as ode_sweep
from .records import LifespanRecord
from .wavesolver import (
    BLOWUP_GUARD,
    ProblemSpec,
    make_grid,
    run,
    sample_initial_profiles,
)


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one sweep needs; PDE and ODE fields coexist, source picks."""

    source: str
    eps: tuple[float, ...]
    # pde parameters
    dim: int = 1
    p: float = 2.0
    profile: str = "bump"
    amplitude: float = 1.0
    dr: float = 0.1
    dt0: float = 0.05
    t_max: float = 100.0
    guard: float = BLOWUP_GUARD
    theta: float = 0.1
    cadence: float | None = None
    refine: int = 0
    node_budget: int = 1_000_000
    # ode parameters
    alpha: float = 1.0
    beta: float = 1.0
    c0: float = 1.0
    i0_prime: float = 0.0
    horizon: float = 1e6
    tol: float = 1e-8
    first_order: bool = False
    # orchestration
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.source not in ("pde", "ode"):
            raise ConfigError(f"source must be 'pde' or 'ode', got {self.source!r}")
        if any(e <= 0.0 for e in self.eps):
            raise ConfigError("epsilon values must be positive")
        if self.refine < 0:
            raise ConfigError(f"refine level must be nonnegative, got {self.refine}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))


def run_experiment(spec: ExperimentSpec) -> list[LifespanRecord]:
    """Execute the sweep and return records sorted by epsilon descending."""
    if not spec.eps:
        return []
    if spec.source == "ode":
        template = OdeParams(spec.alpha, spec.beta, spec.c0, max(spec.eps), spec.i0_prime)
        return ode_sweep(
            template,
            list(spec.eps),
            horizon=spec.horizon,
            tol=spec.tol,
            first_order=spec.first_order,
        )
    return _pde_sweep(spec)


def _pde_sweep(spec: ExperimentSpec) -> list[LifespanRecord]:
    dr = spec.dr / 2**spec.refine
    dt0 = spec.dt0 / 2**spec.refine
    base = ProblemSpec(
        dim=spec.dim, p=spec.p, epsilon=max(spec.eps), f=None, g=None, t_max=spec.t_max
    )
    grid = make_grid(base, dr, node_budget=spec.node_budget)
    f, g = sample_initial_profiles(spec.profile, grid)
    if spec.amplitude != 1.0:
        f = RadialProfile(grid, spec.amplitude * f.values)
        g = RadialProfile(grid, spec.amplitude * g.values)
    meta = {
        "dr": dr,
        "dt0": dt0,
        "refine": spec.refine,
        "profile": spec.profile,
        "amplitude": spec.amplitude,
        "guard": spec.guard,
        "seed": spec.seed,
    }

    def one(eps: float) -> LifespanRecord:
        problem = ProblemSpec(
            dim=spec.dim,
            p=spec.p,
            epsilon=eps,
            f=f,
            g=g,
            t_max=spec.t_max,
            nonlinearity_on=True,
        )
        try:
            _, report = run(
                problem,
                grid,
                dt0,
                cadence=spec.cadence,
                guard=spec.guard,
                theta=spec.theta,
            )
            return LifespanRecord(
                epsilon=eps,
                T=report.T_est,
                status=report.status.value,
                source="pde",
                dim=float(spec.dim),
                p=spec.p,
                meta=meta,
            )
        except NumericalError as exc:
            return LifespanRecord(
                epsilon=eps,
                T=None,
                status="Failed",
                source="pde",
                dim=float(spec.dim),
                p=spec.p,
                meta={**meta, "error": str(exc)},
            )

    eps_sorted = sorted(spec.eps, reverse=True)
    if spec.workers == 1:
        records = [one(e) for e in eps_sorted]
    else:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(one, eps_sorted))
    return records
