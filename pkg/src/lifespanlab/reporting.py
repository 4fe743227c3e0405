"""Flat-file reports: sweep records, fit summaries, and trace dumps.

All rendering is pure string building from the inputs, with floats printed
via repr (shortest round-trip form) and no timestamps or environment data,
so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .functionals import FunctionalTrace
from .grids import RadialGrid
from .records import FitResult, LifespanRecord
from .wavesolver import SolutionSnapshot

RECORD_HEADER = "epsilon,T,status,source,dim,p"
FUNCTIONAL_HEADER = "t,G,F,A,B,D,duhamel_residual,gamma_tilde"
TRACE_HEADER = "t,r,u,v"

_META_KEYS = ("dr", "dt0", "refine", "profile", "amplitude", "guard", "seed")


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def render_report(records: list[LifespanRecord], fits: list[FitResult] = ()) -> str:
    lines = [RECORD_HEADER]
    for r in records:
        lines.append(
            f"{_fmt(r.epsilon)},{_fmt(r.T)},{r.status},{r.source},{_fmt(r.dim)},{_fmt(r.p)}"
        )
    for fit in fits:
        parts = [
            f"law={fit.law}",
            f"C={_fmt(fit.C)}",
            f"offset={_fmt(fit.offset)}",
            f"exponent={_fmt(fit.exponent)}",
            f"fitted_exponent={_fmt(fit.fitted_exponent)}",
            f"r_squared={_fmt(fit.r_squared)}",
        ]
        lines.append("# fit " + " ".join(parts))
        lines.append("# residuals " + " ".join(_fmt(v) for v in fit.residuals))
    if records:
        meta = records[0].meta
        items = [f"{k}={meta[k]}" for k in _META_KEYS if k in meta]
        if items:
            lines.append("# meta " + " ".join(items))
    return "\n".join(lines) + "\n"


def emit_report(records: list[LifespanRecord], fits: list[FitResult], path) -> None:
    text = render_report(records, fits)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_records(path) -> list[LifespanRecord]:
    """Parse a records CSV back; '#' summary lines are skipped."""
    records = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read records from {path}: {exc}") from exc
    if not lines or lines[0] != RECORD_HEADER:
        raise ConfigError(f"{path} is not a records CSV (bad header)")
    for line in lines[1:]:
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise ConfigError(f"malformed record line: {line!r}")
        eps, T, status, source, dim, p = parts
        records.append(
            LifespanRecord(
                epsilon=float(eps),
                T=float(T) if T else None,
                status=status,
                source=source,
                dim=float(dim),
                p=float(p),
            )
        )
    return records


def render_trace(grid: RadialGrid, snapshots: list[SolutionSnapshot], meta: dict) -> str:
    lines = [f"# {k}={meta[k]}" for k in sorted(meta)]
    lines.append(f"# dr={_fmt(grid.dr)} count={grid.count} dim={grid.dim}")
    lines.append(TRACE_HEADER)
    for snap in snapshots:
        t_str = _fmt(snap.t)
        r = grid.r[: len(snap.u)]
        for rr, uu, vv in zip(r, snap.u, snap.v):
            lines.append(f"{t_str},{_fmt(rr)},{_fmt(uu)},{_fmt(vv)}")
    return "\n".join(lines) + "\n"


def write_trace(path, grid: RadialGrid, snapshots: list[SolutionSnapshot], meta: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_trace(grid, snapshots, meta))
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc


def read_trace(path) -> tuple[RadialGrid, list[SolutionSnapshot], dict]:
    """Rebuild the grid and trimmed snapshots from a trace dump."""
    meta: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read trace from {path}: {exc}") from exc
    snapshots: list[SolutionSnapshot] = []
    cur_t: float | None = None
    cur_rows: list[tuple[float, float]] = []

    def flush():
        if cur_t is not None and cur_rows:
            u = np.array([row[0] for row in cur_rows])
            v = np.array([row[1] for row in cur_rows])
            snapshots.append(SolutionSnapshot(cur_t, u, v))
        cur_rows.clear()

    for line in lines:
        if line.startswith("#"):
            for item in line[1:].split():
                if "=" in item:
                    k, val = item.split("=", 1)
                    meta[k] = val
            continue
        if line == TRACE_HEADER or not line:
            continue
        t_s, _r_s, u_s, v_s = line.split(",")
        t = float(t_s)
        if cur_t is None or t != cur_t:
            flush()
            cur_t = t
        cur_rows.append((float(u_s), float(v_s)))
    flush()
    if "dr" not in meta or "count" not in meta or "dim" not in meta:
        raise ConfigError(f"{path} is missing grid metadata")
    grid = RadialGrid(dr=float(meta["dr"]), count=int(meta["count"]), dim=int(meta["dim"]))
    return grid, snapshots, meta


def render_functionals(ftrace: FunctionalTrace) -> str:
    lines = [
        f"# t0={_fmt(ftrace.anchor_time)} epsilon={_fmt(ftrace.anchor_value)}",
        FUNCTIONAL_HEADER,
    ]
    for j in range(len(ftrace.times)):
        lines.append(
            ",".join(
                _fmt(col[j])
                for col in (
                    ftrace.times,
                    ftrace.G,
                    ftrace.F,
                    ftrace.A,
                    ftrace.B,
                    ftrace.D,
                    ftrace.duhamel_residual,
                    ftrace.gamma_tilde,
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_functionals(path, ftrace: FunctionalTrace) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_functionals(ftrace))
    except OSError as exc:
        raise OSError(f"cannot write functionals to {path}: {exc}") from exc
