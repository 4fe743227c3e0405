"""Request and response models for the service endpoints.

These are the wire contract: the CLI builds the same models and either
posts them to a server or dispatches in process, so every path through the
lab goes through one validated schema.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class RecordModel(BaseModel):
    epsilon: float
    T: Optional[float] = None
    status: str
    source: str
    dim: float
    p: float


class SweepResponse(BaseModel):
    records: list[RecordModel]


class OdeSweepRequest(BaseModel):
    alpha: float = Field(gt=0)
    beta: float = Field(default=1.0, ge=0.0, le=1.0)
    c0: float = Field(default=1.0, gt=0)
    i0_prime: float = Field(default=0.0, ge=0.0)
    eps: list[float]
    horizon: float = 1e6
    tol: float = 1e-8
    first_order: bool = False
    seed: int = 0


class PdeSweepRequest(BaseModel):
    dim: int = Field(default=1, ge=1, le=8)
    p: float = Field(gt=1.0)
    eps: list[float]
    profile: str = "bump"
    amplitude: float = Field(default=1.0, gt=0)
    dr: float = Field(default=0.1, gt=0)
    dt: float = Field(default=0.05, gt=0)
    t_max: float = Field(default=100.0, gt=0)
    refine: int = Field(default=0, ge=0)
    guard: float = Field(default=1e8, gt=0)
    theta: float = Field(default=0.1, gt=0)
    workers: int = Field(default=1, ge=1)
    seed: int = 0


class KernelCheckRequest(BaseModel):
    dims: list[int] = [1, 2, 3, 4, 5, 6]
    times: list[float] = [0.1, 1.0, 10.0]
    mass_rel_dr: float = 2e-4
    mass_tolerance: float = 1e-8
    semigroup_pairs: list[tuple[float, float]] = [(1.0, 2.0)]
    semigroup_dims: list[int] = [1, 2, 4]
    semigroup_dr: float = 0.015
    semigroup_tolerance: float = 1e-6
    order_dim: int = 3
    order_dr: float = 0.04


class KernelCheckItem(BaseModel):
    name: str
    params: str
    value: float
    target: float
    passed: bool


class KernelCheckResponse(BaseModel):
    checks: list[KernelCheckItem]
    passed: bool


class SnapshotModel(BaseModel):
    t: float
    u: list[float]
    v: list[float]


class FunctionalsRequest(BaseModel):
    dim: int = Field(ge=1, le=8)
    p: float = Field(gt=1.0)
    epsilon: float = Field(gt=0)
    profile: str = "bump"
    amplitude: float = Field(default=1.0, gt=0)
    dr: float = Field(gt=0)
    count: int = Field(ge=2)
    snapshots: list[SnapshotModel]
    t0: Optional[float] = None


class FunctionalsRow(BaseModel):
    t: float
    G: float
    F: float
    A: float
    B: float
    D: float
    duhamel_residual: float
    gamma_tilde: float


class FunctionalsResponse(BaseModel):
    rows: list[FunctionalsRow]
    anchor_time: float
    anchor_value: float


class FitRequest(BaseModel):
    law: Literal["critical", "subcritical"]
    dim: float = Field(gt=0)
    p: Optional[float] = None
    log1p: bool = False
    records: list[RecordModel]


class FitResponse(BaseModel):
    law: str
    C: float
    offset: float
    exponent: float
    fitted_exponent: Optional[float] = None
    r_squared: float
    residuals: list[float]


class HealthResponse(BaseModel):
    status: str
