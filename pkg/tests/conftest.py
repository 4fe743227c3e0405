"""Shared fixtures and trajectory helpers for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from lifespanlab.functionals import SolverTrace
from lifespanlab.grids import RadialGrid, RadialProfile
from lifespanlab.wavesolver import ProblemSpec, make_grid, run, sample_initial_profiles


def build_problem(dim, p, eps, t_max, dr, profile="bump", amplitude=1.0):
    base = ProblemSpec(dim=dim, p=p, epsilon=eps, f=None, g=None, t_max=t_max)
    grid = make_grid(base, dr)
    f, g = sample_initial_profiles(profile, grid)
    if amplitude != 1.0:
        f = RadialProfile(grid, amplitude * f.values)
        g = RadialProfile(grid, amplitude * g.values)
    spec = ProblemSpec(dim=dim, p=p, epsilon=eps, f=f, g=g, t_max=t_max)
    return spec, grid


def run_trace(dim, p, eps, t_max, dr, dt0, cadence, profile="bump", amplitude=1.0,
              guard=1e4, trim_radius=None):
    """Run the solver and wrap the snapshots as a functional-ready trace."""
    spec, grid = build_problem(dim, p, eps, t_max, dr, profile, amplitude)
    snaps, report = run(spec, grid, dt0, cadence=cadence, guard=guard, trim_radius=trim_radius)
    data = RadialProfile(grid, spec.f.values + spec.g.values)
    return SolverTrace(grid, dim, p, eps, data, snaps), report


def nearest_time(trace: SolverTrace, target: float) -> float:
    times = trace.times
    return float(times[np.argmin(np.abs(times - target))])


@pytest.fixture(scope="session")
def short_blowup_trace():
    """Small n=1 blow-up trajectory shared by functional tests."""
    trace, report = run_trace(1, 3.0, 0.7, 30.0, 0.05, 0.025, 0.25,
                              profile="plateau", guard=3e3)
    assert report.status.value == "BlewUp"
    return trace, report


@pytest.fixture()
def unit_grid_1d():
    return RadialGrid(dr=0.01, count=1301, dim=1)
