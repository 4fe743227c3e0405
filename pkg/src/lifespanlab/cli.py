"""Command-line client for the lifespan laboratory.

Subcommands: kernel-check, pde-sweep, ode-sweep, functionals, fit, serve.
Each talks to the service through the shared request models; by default the
handlers run in process, with --url they go over HTTP to a server started
via `lifespanlab serve`.

Options may come from a flat key=value config file (--config); flags given
on the command line override file values. Exit codes: 0 success, 1 invalid
configuration, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .client import LabClient
from .errors import ConfigError, NumericalError
from .functionals import FunctionalTrace
from .records import FitResult, LifespanRecord
from .reporting import (
    emit_report,
    read_records,
    read_trace,
    render_functionals,
    write_trace,
)
from .service import models


def load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


class Options:
    """Flag > config-file > default resolution for one subcommand."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cfg = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, typ, default):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.cfg:
            raw = self.cfg[key]
            try:
                if typ is bool:
                    return raw.lower() in ("1", "true", "yes", "on")
                return typ(raw)
            except ValueError as exc:
                raise ConfigError(f"config key {key}={raw!r} is not a valid {typ.__name__}") from exc
        return default

    def eps(self, default=None):
        raw = self.get("eps", str, default)
        if raw is None:
            raise ConfigError("an epsilon list is required (--eps 0.4,0.3,...)")
        if isinstance(raw, (list, tuple)):
            return [float(v) for v in raw]
        try:
            return [float(tok) for tok in str(raw).split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse epsilon list {raw!r}") from exc


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="flat key=value config file; flags override it")
    sub.add_argument("--url", help="base URL of a running service (default: in-process)")
    sub.add_argument("--out", help="output CSV path (default: stdout)")
    sub.add_argument("--seed", type=int, help="seed recorded with the run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lifespanlab", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    kc = subs.add_parser("kernel-check", help="run the heat-kernel validation suite")
    _add_common(kc)
    kc.add_argument("--mass-rel-dr", dest="mass_rel_dr", type=float)
    kc.add_argument("--semigroup-dr", dest="semigroup_dr", type=float)

    pde = subs.add_parser("pde-sweep", help="epsilon sweep of the wave solver")
    _add_common(pde)
    pde.add_argument("--dim", type=int)
    pde.add_argument("--p", type=float)
    pde.add_argument("--eps", help="comma-separated epsilon list")
    pde.add_argument("--profile", choices=["bump", "cone", "plateau"])
    pde.add_argument("--amplitude", type=float)
    pde.add_argument("--dr", type=float)
    pde.add_argument("--dt", type=float)
    pde.add_argument("--t-max", dest="t_max", type=float)
    pde.add_argument("--refine", type=int, help="halve dr and dt this many times")
    pde.add_argument("--guard", type=float)
    pde.add_argument("--theta", type=float)
    pde.add_argument("--workers", type=int)
    pde.add_argument("--cadence", type=float, help="snapshot interval for trace dumps")
    pde.add_argument("--trace-out", dest="trace_out", help="dump the trajectory (single epsilon)")

    ode = subs.add_parser("ode-sweep", help="epsilon sweep of the blow-up ODE")
    _add_common(ode)
    ode.add_argument("--alpha", type=float)
    ode.add_argument("--beta", type=float)
    ode.add_argument("--c0", type=float)
    ode.add_argument("--i0-prime", dest="i0_prime", type=float)
    ode.add_argument("--eps", help="comma-separated epsilon list")
    ode.add_argument("--horizon", type=float)
    ode.add_argument("--tol", type=float)
    ode.add_argument("--first-order", dest="first_order", action="store_const", const=True)

    fn = subs.add_parser("functionals", help="evaluate functionals along a dumped trace")
    _add_common(fn)
    fn.add_argument("--trace", required=True, help="trace CSV from pde-sweep --trace-out")
    fn.add_argument("--dim", type=int)
    fn.add_argument("--p", type=float)
    fn.add_argument("--eps", help="epsilon of the dumped run")
    fn.add_argument("--profile", choices=["bump", "cone", "plateau"])
    fn.add_argument("--amplitude", type=float)
    fn.add_argument("--t0", type=float, help="anchor time for the growth envelope")

    fit = subs.add_parser("fit", help="fit a lifespan scaling law to records")
    _add_common(fit)
    fit.add_argument("--records", required=True, help="records CSV from a sweep")
    fit.add_argument("--law", choices=["critical", "subcritical"])
    fit.add_argument("--dim", type=float)
    fit.add_argument("--p", type=float)
    fit.add_argument("--log1p", action="store_const", const=True, help="regress log(1+T)")

    srv = subs.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)

    return parser


def _write_or_print(text: str, out: str | None):
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _records_from_response(resp: models.SweepResponse) -> list[LifespanRecord]:
    return [
        LifespanRecord(epsilon=m.epsilon, T=m.T, status=m.status, source=m.source, dim=m.dim, p=m.p)
        for m in resp.records
    ]


def cmd_kernel_check(args) -> int:
    opt = Options(args)
    req = models.KernelCheckRequest(
        mass_rel_dr=opt.get("mass_rel_dr", float, 2e-4),
        semigroup_dr=opt.get("semigroup_dr", float, 0.015),
    )
    resp = LabClient(args.url).kernel_check(req)
    lines = ["name,params,value,target,passed"]
    for c in resp.checks:
        lines.append(f"{c.name},{c.params},{c.value!r},{c.target!r},{c.passed}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    if not resp.passed:
        sys.stderr.write("kernel-check: FAILED\n")
        return 2
    return 0


def cmd_pde_sweep(args) -> int:
    opt = Options(args)
    eps = opt.eps()
    trace_out = opt.get("trace_out", str, None)
    cadence = opt.get("cadence", float, None)
    common = dict(
        dim=opt.get("dim", int, 1),
        p=opt.get("p", float, 2.0),
        profile=opt.get("profile", str, "bump"),
        amplitude=opt.get("amplitude", float, 1.0),
        dr=opt.get("dr", float, 0.1),
        dt=opt.get("dt", float, 0.05),
        t_max=opt.get("t_max", float, 100.0),
        refine=opt.get("refine", int, 0),
        guard=opt.get("guard", float, 1e8),
        theta=opt.get("theta", float, 0.1),
        workers=opt.get("workers", int, 1),
        seed=opt.get("seed", int, 0),
    )
    if trace_out is not None:
        if len(eps) != 1:
            raise ConfigError("--trace-out requires exactly one epsilon")
        if args.url:
            raise ConfigError("trace dumps are produced locally; drop --url")
        records = _dump_trace(common, eps[0], cadence or 0.05, trace_out)
    else:
        req = models.PdeSweepRequest(eps=eps, **common)
        records = _records_from_response(LabClient(args.url).pde_sweep(req))
    from .reporting import render_report

    _write_or_print(render_report(records, []), args.out)
    return 0


def _dump_trace(common: dict, eps: float, cadence: float, trace_out: str) -> list[LifespanRecord]:
    from .experiments import ExperimentSpec
    from .grids import RadialProfile
    from .wavesolver import ProblemSpec, make_grid, run, sample_initial_profiles

    refine = common["refine"]
    dr = common["dr"] / 2**refine
    dt0 = common["dt"] / 2**refine
    base = ProblemSpec(common["dim"], common["p"], eps, None, None, common["t_max"])
    grid = make_grid(base, dr)
    f, g = sample_initial_profiles(common["profile"], grid)
    if common["amplitude"] != 1.0:
        f = RadialProfile(grid, common["amplitude"] * f.values)
        g = RadialProfile(grid, common["amplitude"] * g.values)
    spec = ProblemSpec(common["dim"], common["p"], eps, f, g, common["t_max"])
    snaps, report = run(
        spec, grid, dt0, cadence=cadence, guard=common["guard"], theta=common["theta"]
    )
    meta = {
        "p": common["p"],
        "epsilon": eps,
        "profile": common["profile"],
        "amplitude": common["amplitude"],
        "cadence": cadence,
    }
    write_trace(trace_out, grid, snaps, meta)
    return [
        LifespanRecord(
            epsilon=eps,
            T=report.T_est,
            status=report.status.value,
            source="pde",
            dim=float(common["dim"]),
            p=common["p"],
        )
    ]


def cmd_ode_sweep(args) -> int:
    opt = Options(args)
    req = models.OdeSweepRequest(
        alpha=opt.get("alpha", float, 1.0),
        beta=opt.get("beta", float, 1.0),
        c0=opt.get("c0", float, 1.0),
        i0_prime=opt.get("i0_prime", float, 0.0),
        eps=opt.eps(),
        horizon=opt.get("horizon", float, 1e6),
        tol=opt.get("tol", float, 1e-8),
        first_order=opt.get("first_order", bool, False),
        seed=opt.get("seed", int, 0),
    )
    records = _records_from_response(LabClient(args.url).ode_sweep(req))
    from .reporting import render_report

    _write_or_print(render_report(records, []), args.out)
    return 0


def cmd_functionals(args) -> int:
    opt = Options(args)
    grid, snaps, meta = read_trace(args.trace)
    def meta_get(key, typ, default):
        return typ(meta[key]) if key in meta else default

    req = models.FunctionalsRequest(
        dim=opt.get("dim", int, grid.dim),
        p=opt.get("p", float, meta_get("p", float, 2.0)),
        epsilon=float(opt.eps(default=meta.get("epsilon", "0"))[0]),
        profile=opt.get("profile", str, meta_get("profile", str, "bump")),
        amplitude=opt.get("amplitude", float, meta_get("amplitude", float, 1.0)),
        dr=grid.dr,
        count=grid.count,
        snapshots=[
            models.SnapshotModel(t=s.t, u=list(map(float, s.u)), v=list(map(float, s.v)))
            for s in snaps
        ],
        t0=opt.get("t0", float, None),
    )
    resp = LabClient(args.url).functionals(req)
    ftrace = FunctionalTrace(
        times=np.array([r.t for r in resp.rows]),
        G=np.array([r.G for r in resp.rows]),
        F=np.array([r.F for r in resp.rows]),
        A=np.array([r.A for r in resp.rows]),
        B=np.array([r.B for r in resp.rows]),
        D=np.array([r.D for r in resp.rows]),
        duhamel_residual=np.array([r.duhamel_residual for r in resp.rows]),
        gamma_tilde=np.array([r.gamma_tilde for r in resp.rows]),
        anchor_time=resp.anchor_time,
        anchor_value=resp.anchor_value,
    )
    _write_or_print(render_functionals(ftrace), args.out)
    return 0


def cmd_fit(args) -> int:
    opt = Options(args)
    records = read_records(args.records)
    law = opt.get("law", str, "critical")
    if law not in ("critical", "subcritical"):
        raise ConfigError(f"unknown law {law!r}")
    dim = opt.get("dim", float, records[0].dim if records else None)
    if dim is None:
        raise ConfigError("fit requires --dim or records with a dim column")
    req = models.FitRequest(
        law=law,
        dim=dim,
        p=opt.get("p", float, records[0].p if records else None),
        log1p=opt.get("log1p", bool, False),
        records=[
            models.RecordModel(
                epsilon=r.epsilon, T=r.T, status=r.status, source=r.source, dim=r.dim, p=r.p
            )
            for r in records
        ],
    )
    resp = LabClient(args.url).fit(req)
    result = FitResult(
        law=resp.law,
        C=resp.C,
        offset=resp.offset,
        exponent=resp.exponent,
        r_squared=resp.r_squared,
        residuals=np.array(resp.residuals),
        fitted_exponent=resp.fitted_exponent,
    )
    from .reporting import render_report

    _write_or_print(render_report(records, [result]), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


COMMANDS = {
    "kernel-check": cmd_kernel_check,
    "pde-sweep": cmd_pde_sweep,
    "ode-sweep": cmd_ode_sweep,
    "functionals": cmd_functionals,
    "fit": cmd_fit,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
