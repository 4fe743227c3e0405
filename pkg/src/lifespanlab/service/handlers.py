"""Endpoint logic, independent of the transport.

The FastAPI routes and the CLI's in-process mode both call these; they
translate between wire models and the core package and raise ConfigError
or NumericalError, which the transports map to status codes / exit codes.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..experiments import ExperimentSpec, run_experiment
from ..fitting import fit_critical, fit_subcritical
from ..functionals import SolverTrace, evaluate_trace
from ..grids import RadialGrid, RadialProfile
from ..heatkernel import heat_residual, kernel_mass, make_kernel_grid, semigroup_residual
from ..records import LifespanRecord
from ..wavesolver import SolutionSnapshot, sample_initial_profiles
from . import models


def _to_record_model(rec: LifespanRecord) -> models.RecordModel:
    return models.RecordModel(
        epsilon=rec.epsilon, T=rec.T, status=rec.status, source=rec.source, dim=rec.dim, p=rec.p
    )


def _from_record_model(m: models.RecordModel) -> LifespanRecord:
    return LifespanRecord(
        epsilon=m.epsilon, T=m.T, status=m.status, source=m.source, dim=m.dim, p=m.p
    )


def ode_sweep(req: models.OdeSweepRequest) -> models.SweepResponse:
    spec = ExperimentSpec(
        source="ode",
        eps=tuple(req.eps),
        alpha=req.alpha,
        beta=req.beta,
        c0=req.c0,
        i0_prime=req.i0_prime,
        horizon=req.horizon,
        tol=req.tol,
        first_order=req.first_order,
        seed=req.seed,
    )
    records = run_experiment(spec)
    return models.SweepResponse(records=[_to_record_model(r) for r in records])


def pde_sweep(req: models.PdeSweepRequest) -> models.SweepResponse:
    spec = ExperimentSpec(
        source="pde",
        eps=tuple(req.eps),
        dim=req.dim,
        p=req.p,
        profile=req.profile,
        amplitude=req.amplitude,
        dr=req.dr,
        dt0=req.dt,
        t_max=req.t_max,
        refine=req.refine,
        guard=req.guard,
        theta=req.theta,
        workers=req.workers,
        seed=req.seed,
    )
    records = run_experiment(spec)
    return models.SweepResponse(records=[_to_record_model(r) for r in records])


def kernel_check(req: models.KernelCheckRequest) -> models.KernelCheckResponse:
    checks: list[models.KernelCheckItem] = []
    for t in req.times:
        for dim in req.dims:
            grid = make_kernel_grid(t, dim, rel_dr=req.mass_rel_dr)
            mass, _ = kernel_mass(t, dim, grid)
            gap = abs(mass - 1.0)
            checks.append(
                models.KernelCheckItem(
                    name="mass",
                    params=f"t={t} dim={dim}",
                    value=gap,
                    target=req.mass_tolerance,
                    passed=gap < req.mass_tolerance,
                )
            )
    for t, s in req.semigroup_pairs:
        r_max = max(
            12.2 * np.sqrt(max(t, s)), 12.2 * np.sqrt(t + s)
        )  # cover both factors and the target kernel
        for dim in req.semigroup_dims:
            count = int(r_max / req.semigroup_dr) + 1
            grid = RadialGrid(dr=req.semigroup_dr, count=count, dim=dim)
            res = semigroup_residual(t, s, grid)
            checks.append(
                models.KernelCheckItem(
                    name="semigroup",
                    params=f"t={t} s={s} dim={dim}",
                    value=res,
                    target=req.semigroup_tolerance,
                    passed=res < req.semigroup_tolerance,
                )
            )
    r_max = 12.2
    coarse = RadialGrid(dr=req.order_dr, count=int(r_max / req.order_dr) + 1, dim=req.order_dim)
    fine = RadialGrid(dr=req.order_dr / 2, count=2 * int(r_max / req.order_dr) + 1, dim=req.order_dim)
    ratio = heat_residual(1.0, coarse) / heat_residual(1.0, fine)
    checks.append(
        models.KernelCheckItem(
            name="heat_residual_order",
            params=f"t=1.0 dim={req.order_dim} dr={req.order_dr}",
            value=ratio,
            target=4.0,
            passed=3.5 <= ratio <= 4.5,
        )
    )
    return models.KernelCheckResponse(checks=checks, passed=all(c.passed for c in checks))


def functionals(req: models.FunctionalsRequest) -> models.FunctionalsResponse:
    grid = RadialGrid(dr=req.dr, count=req.count, dim=req.dim)
    f, g = sample_initial_profiles(req.profile, grid)
    data = RadialProfile(grid, req.amplitude * (f.values + g.values))
    snaps = []
    for s in req.snapshots:
        if len(s.u) != len(s.v) or len(s.u) > req.count:
            raise ConfigError("snapshot arrays malformed")
        snaps.append(SolutionSnapshot(s.t, np.asarray(s.u, dtype=float), np.asarray(s.v, dtype=float)))
    trace = SolverTrace(grid, req.dim, req.p, req.epsilon, data, snaps)
    ftrace = evaluate_trace(trace, t0=req.t0)
    rows = [
        models.FunctionalsRow(
            t=float(ftrace.times[j]),
            G=float(ftrace.G[j]),
            F=float(ftrace.F[j]),
            A=float(ftrace.A[j]),
            B=float(ftrace.B[j]),
            D=float(ftrace.D[j]),
            duhamel_residual=float(ftrace.duhamel_residual[j]),
            gamma_tilde=float(ftrace.gamma_tilde[j]),
        )
        for j in range(len(ftrace.times))
    ]
    return models.FunctionalsResponse(
        rows=rows, anchor_time=ftrace.anchor_time, anchor_value=ftrace.anchor_value
    )


def fit(req: models.FitRequest) -> models.FitResponse:
    records = [_from_record_model(m) for m in req.records]
    if req.law == "critical":
        result = fit_critical(records, req.dim, use_log1p=req.log1p)
    else:
        if req.p is None:
            raise ConfigError("subcritical fit requires p")
        result = fit_subcritical(records, req.dim, req.p)
    return models.FitResponse(
        law=result.law,
        C=result.C,
        offset=result.offset,
        exponent=result.exponent,
        fitted_exponent=result.fitted_exponent,
        r_squared=result.r_squared,
        residuals=[float(v) for v in result.residuals],
    )
