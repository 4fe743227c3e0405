"""Trajectory functionals: moments, history term, Duhamel balance, envelope."""
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import expi

from conftest import nearest_time, run_trace
from lifespanlab.errors import ConfigError
from lifespanlab.functionals import (
    FunctionalTrace,
    SolverTrace,
    data_term,
    duhamel_residual,
    evaluate_trace,
    exp_tail_ratio,
    growth_envelope,
    history_term,
    holder_bound_constant,
    source_term,
    velocity_mass,
    velocity_moment_constant,
    weighted_lp_norm,
    weighted_mass,
)
from lifespanlab.grids import RadialGrid, RadialProfile
from lifespanlab.heatkernel import kernel_values, make_kernel_grid, moment_on_grid
from lifespanlab.wavesolver import SolutionSnapshot


def _snapshot(grid, t, u, v=None):
    v = np.zeros_like(u) if v is None else v
    return SolutionSnapshot(t, u, v)


class TestPointwiseFunctionals:
    def test_zero_field(self):
        grid = RadialGrid(dr=0.05, count=200, dim=2)
        snap = _snapshot(grid, 1.3, np.zeros(grid.count))
        assert weighted_mass(snap, grid) == 0.0
        assert velocity_mass(snap, grid) == 0.0
        assert weighted_lp_norm(snap, grid, 2.0) == 0.0

    def test_initial_data_equality(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        snap0 = trace.snapshots[0]
        f_moment = moment_on_grid(trace.data.values, trace.grid, 1.0, 0)
        lhs = weighted_mass(snap0, trace.grid) + velocity_mass(snap0, trace.grid)
        assert lhs == pytest.approx(trace.epsilon * f_moment, rel=1e-12)
        assert lhs > 0.0

    @pytest.mark.parametrize("dim,t", [(1, 0.0), (2, 1.5), (4, 0.5)])
    def test_gaussian_field_closed_forms(self, dim, t):
        s = t + 1.0
        grid = make_kernel_grid(4.0 * s, dim, rel_dr=2e-4)
        u = np.exp(-grid.r**2 / (4.0 * s))
        snap = _snapshot(grid, t, u)
        assert weighted_mass(snap, grid) == pytest.approx(
            (2.0 * math.pi * s) ** (dim / 2.0), rel=1e-7
        )
        p = 1.0 + 2.0 / dim
        expect_lp = ((4.0 * math.pi * s / (1.0 + p)) ** (dim / 2.0)) ** (1.0 / p) * s ** (
            dim * (p - 1.0) / (2.0 * p)
        )
        assert weighted_lp_norm(snap, grid, p) == pytest.approx(expect_lp, rel=1e-7)

    def test_critical_normalization_power_4d(self):
        # at dim=4, p=3/2 the normalization is (t+1)^(n/(n+2)) = (t+1)^(2/3)
        grid = RadialGrid(dr=0.01, count=2500, dim=4)
        u = np.exp(-grid.r)
        t = 2.0
        snap = _snapshot(grid, t, u)
        raw = moment_on_grid(np.abs(u) ** 1.5, grid, t + 1.0, 0)
        expect = raw ** (1.0 / 1.5) * (t + 1.0) ** (2.0 / 3.0)
        assert weighted_lp_norm(snap, grid, 1.5) == pytest.approx(expect, rel=1e-13)

    def test_velocity_decomposition_identity(self):
        # A equals dG/dt minus the second-moment correction along a smooth run
        trace, _ = run_trace(1, 3.0, 0.4, 2.0, 0.04, 0.02, 0.02)
        times = trace.times
        j = len(times) // 2
        grid = trace.grid
        G = np.array([weighted_mass(s, grid) for s in trace.snapshots[j - 1 : j + 2]])
        dG = (G[2] - G[0]) / (times[j + 1] - times[j - 1])
        snap = trace.snapshots[j]
        s = snap.t + 1.0
        correction = moment_on_grid(snap.u, grid, s, 2) / (4.0 * s * s)
        A = velocity_mass(snap, grid)
        assert A == pytest.approx(dG - correction, rel=2e-3)


class TestSourceAndHistory:
    def test_zero_trace(self):
        grid = RadialGrid(dr=0.05, count=100, dim=1)
        snaps = [_snapshot(grid, 0.1 * k, np.zeros(grid.count)) for k in range(5)]
        trace = SolverTrace(grid, 1, 2.0, 1.0, RadialProfile.zeros(grid), snaps)
        assert source_term(trace, 0.4) == 0.0
        assert history_term(trace, 0.4) == 0.0

    def test_empty_integral_at_time_zero(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        assert source_term(trace, 0.0) == 0.0
        assert history_term(trace, 0.0) == 0.0

    def test_non_snapshot_time_rejected(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        with pytest.raises(ConfigError):
            source_term(trace, 0.1234567)

    def test_source_lower_bound(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        times = trace.times
        F = np.array([weighted_lp_norm(s, trace.grid, trace.p) for s in trace.snapshots])
        for j in (len(times) // 3, len(times) - 1):
            t = times[j]
            D = source_term(trace, t)
            bound = 2.0 ** (-trace.grid.dim / 2.0) * np.trapezoid(
                F[: j + 1] ** trace.p / (1.0 + times[: j + 1]), times[: j + 1]
            )
            assert D >= bound - 1e-10 * (1.0 + abs(D))

    def test_history_term_against_direct_double_quadrature(self):
        # oracle: evaluate the uncollapsed kernel pairing by explicit quadrature
        # in x for each (tau, y), full-line for n=1; compare partial integrals
        # over tau <= t - 0.5, clear of the short-time kernel concentration
        trace, _ = run_trace(1, 3.0, 0.5, 1.0, 0.05, 0.025, 0.1)
        grid = trace.grid
        t = nearest_time(trace, 1.0)
        snaps = [s for s in trace.snapshots if s.t <= t - 0.5 + 1e-9]
        taus = np.array([s.t for s in snaps])

        # wide full-line x grid: the paired kernel lives at scale t+1,
        # far beyond the run grid
        dx = 0.02
        half = np.arange(0.0, 18.0, dx)
        x = np.concatenate([-half[:0:-1], half])
        wx = np.full(len(x), dx)
        wx[0] = wx[-1] = 0.5 * dx
        kern_x = (4.0 * math.pi * (t + 1.0)) ** -0.5 * np.exp(-x * x / (4.0 * (t + 1.0)))

        def direct_integrand(snap):
            sigma = t - snap.t
            ys = grid.r[: len(snap.v)]
            vals = np.empty(len(ys))
            for i, y in enumerate(ys):
                z = x - y
                dE = kernel_values(sigma, np.abs(z), 1) * (
                    1.0 / (2.0 * sigma) - z * z / (4.0 * sigma**2)
                )
                vals[i] = np.sum(wx * kern_x * dE)
            wy = np.full(len(ys), grid.dr)
            wy[0] = wy[-1] = 0.5 * grid.dr
            # mirror both half-lines of the y integral
            return -((4.0 * math.pi * (t + 1.0)) ** 0.5) * 2.0 * np.sum(wy * vals * snap.v)

        def reduced_integrand(snap):
            s = 2.0 * t + 1.0 - snap.t
            m0 = moment_on_grid(snap.v, grid, s, 0)
            m2 = moment_on_grid(snap.v, grid, s, 2)
            return -(((t + 1.0) / s) ** 0.5) * (m0 / (2.0 * s) - m2 / (4.0 * s * s))

        direct = np.array([direct_integrand(s) for s in snaps])
        reduced = np.array([reduced_integrand(s) for s in snaps])
        int_direct = np.trapezoid(direct, taus)
        int_reduced = np.trapezoid(reduced, taus)
        assert int_direct == pytest.approx(int_reduced, rel=1e-4)


class TestDuhamel:
    def test_zero_epsilon(self):
        trace, _ = run_trace(1, 3.0, 0.0, 1.0, 0.05, 0.025, 0.2)
        t = nearest_time(trace, 1.0)
        assert duhamel_residual(trace, t) == 0.0

    def test_time_zero_reduction(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        assert duhamel_residual(trace, 0.0) < 1e-14

    def test_residual_drops_under_refinement(self):
        resids = []
        for lvl in range(2):
            factor = 2**lvl
            trace, _ = run_trace(1, 3.0, 0.5, 2.0, 0.08 / factor, 0.04 / factor, 0.2 / factor)
            worst = max(
                duhamel_residual(trace, nearest_time(trace, t_probe))
                for t_probe in (1.0, 2.0)
            )
            resids.append(worst)
        assert resids[0] / resids[1] >= 3.0

    def test_data_term_requires_profile(self):
        grid = RadialGrid(dr=0.05, count=100, dim=1)
        snaps = [_snapshot(grid, 0.0, np.zeros(grid.count))]
        trace = SolverTrace(grid, 1, 2.0, 1.0, None, snaps)
        with pytest.raises(ConfigError):
            data_term(trace, 0.0)


class TestGrowthEnvelope:
    def test_zero_forcing_stays_at_epsilon(self):
        ts = np.linspace(0.0, 3.0, 61)
        gam = growth_envelope(ts, np.zeros_like(ts), 0.0, 0.25, 2.0)
        assert np.all(gam == 0.25)

    def test_anchor_value_exact(self):
        ts = np.linspace(0.0, 2.0, 41)
        F = 0.3 + 0.1 * ts
        gam = growth_envelope(ts, F, ts[7], 0.125, 3.0)
        assert gam[7] == 0.125
        assert np.all(gam[: 7 + 1] == 0.125)

    def test_anchor_must_be_sample(self):
        ts = np.linspace(0.0, 2.0, 41)
        with pytest.raises(ConfigError):
            growth_envelope(ts, np.ones_like(ts), 0.123, 0.1, 2.0)

    def test_constant_forcing_closed_form(self):
        # nested integral for constant F evaluated through the exponential
        # integral Ei; quadrature of the closed-form inner antiderivative
        c, p, eps, t0 = 0.7, 2.5, 0.3, 0.5
        ts = np.linspace(0.0, 4.0, 2001)
        gam = growth_envelope(ts, np.full_like(ts, c), t0, eps, p)

        def closed(t):
            inner = lambda s: math.exp(s - t) * (
                math.log1p(s) - math.exp(-s) * (expi(1.0 + s) - expi(1.0)) / math.e
            )
            val, _ = quad(inner, t0, t, limit=400)
            return eps + c**p * val

        for t in (1.5, 3.0, 4.0):
            j = int(np.argmin(np.abs(ts - t)))
            assert gam[j] == pytest.approx(closed(ts[j]), rel=1e-5)

    def test_nondecreasing_with_positive_forcing(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        F = np.array([weighted_lp_norm(s, trace.grid, trace.p) for s in trace.snapshots])
        gam = growth_envelope(trace.times, F, trace.times[0], trace.epsilon, trace.p)
        assert np.all(np.diff(gam) >= 0.0)
        assert np.all(np.isfinite(gam))


class TestExpTailRatio:
    def test_vanishes_at_origin(self):
        assert exp_tail_ratio(0.0) == 0.0
        assert exp_tail_ratio(1e-6) < 1e-5

    def test_approaches_one(self):
        assert exp_tail_ratio(50.0) == pytest.approx(1.0, abs=0.05)

    def test_dense_sampling_bounded(self):
        # independent oracle: cumulative trapezoid of the shifted integrand
        ts = np.arange(0.0, 100.0 + 1e-9, 0.01)
        integrand = np.exp(ts) / (1.0 + ts)
        cumulative = np.concatenate([[0.0], np.cumsum((integrand[1:] + integrand[:-1]) * 0.005)])
        ratios = cumulative * (1.0 + ts) / np.exp(ts)
        assert np.max(ratios) < 1.5
        assert ratios[-1] == pytest.approx(1.0, abs=0.02)
        j = int(np.argmin(np.abs(ts - 5.0)))
        assert exp_tail_ratio(5.0) == pytest.approx(ratios[j], rel=1e-3)

    def test_rejects_negative(self):
        with pytest.raises(ConfigError):
            exp_tail_ratio(-1.0)


class TestConstants:
    def test_holder_constant_values(self):
        assert holder_bound_constant(1) == pytest.approx((4 * math.pi) ** (1.0 / 3.0), rel=1e-14)
        assert holder_bound_constant(4) == pytest.approx((4 * math.pi) ** (2.0 / 3.0), rel=1e-14)

    @pytest.mark.parametrize("dim,p,s", [(1, 2.0, 1.0), (2, 2.0, 3.0), (4, 1.5, 2.0)])
    def test_velocity_moment_constant_closed_form(self, dim, p, s):
        # direct quadrature of int e^{-r^2/4s} (r^2/4s^2)^{p'} dx against
        # K_n^{p'} s^{n/2 - p'}
        pp = p / (p - 1.0)
        grid = make_kernel_grid(s, dim, rel_dr=1e-4)
        vals = (grid.r**2 / (4.0 * s * s)) ** pp
        numeric = moment_on_grid(vals * np.exp(-grid.r**2 / (4.0 * s)), grid, 1e12, 0)
        # scale 1e12 makes the moment weight inert; the Gaussian is in vals
        expect = velocity_moment_constant(dim, p) ** pp * s ** (dim / 2.0 - pp)
        assert numeric == pytest.approx(expect, rel=1e-6)

    def test_holder_inequality_on_trajectory(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        const = holder_bound_constant(trace.grid.dim)
        for snap in trace.snapshots:
            G = weighted_mass(snap, trace.grid)
            F = weighted_lp_norm(snap, trace.grid, trace.p)
            assert G <= const * F + 1e-9

    def test_velocity_moment_bound_on_trajectory(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        K = velocity_moment_constant(trace.grid.dim, trace.p)
        for snap in trace.snapshots:
            s = snap.t + 1.0
            lhs = moment_on_grid(np.abs(snap.u), trace.grid, s, 2) / (4.0 * s * s)
            F = weighted_lp_norm(snap, trace.grid, trace.p)
            assert lhs <= K * F / s + 1e-9


class TestEvaluateTrace:
    def test_columns_aligned_and_consistent(self, short_blowup_trace):
        trace, _ = short_blowup_trace
        ftrace = evaluate_trace(trace)
        n = len(ftrace.times)
        assert all(
            len(getattr(ftrace, col)) == n
            for col in ("G", "F", "A", "B", "D", "duhamel_residual", "gamma_tilde")
        )
        assert ftrace.anchor_value == trace.epsilon
        assert ftrace.gamma_tilde[0] == trace.epsilon
        assert np.all(ftrace.F >= 0.0)
        assert ftrace.D[0] == 0.0
        j = n // 2
        assert ftrace.duhamel_residual[j] == pytest.approx(
            duhamel_residual(trace, float(ftrace.times[j])), rel=1e-12
        )

    def test_misaligned_columns_rejected(self):
        with pytest.raises(ConfigError):
            FunctionalTrace(
                times=np.array([0.0, 1.0]),
                G=np.zeros(2),
                F=np.zeros(2),
                A=np.zeros(2),
                B=np.zeros(3),
                D=np.zeros(2),
                duhamel_residual=np.zeros(2),
                gamma_tilde=np.zeros(2),
                anchor_time=0.0,
                anchor_value=0.1,
            )
