"""FastAPI application exposing the laboratory over HTTP."""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import ConfigError, NumericalError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="lifespan laboratory",
        description=(
            "Numerical lifespan laboratory for the semilinear damped wave "
            "equation: kernel validation, blow-up sweeps, trajectory "
            "functionals, and scaling-law fits."
        ),
    )

    def guarded(fn, req):
        try:
            return fn(req)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except NumericalError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    @app.get("/healthz", response_model=models.HealthResponse)
    def healthz():
        return models.HealthResponse(status="ok")

    @app.post("/kernel-check", response_model=models.KernelCheckResponse)
    def kernel_check(req: models.KernelCheckRequest):
        return guarded(handlers.kernel_check, req)

    @app.post("/ode-sweep", response_model=models.SweepResponse)
    def ode_sweep(req: models.OdeSweepRequest):
        return guarded(handlers.ode_sweep, req)

    @app.post("/pde-sweep", response_model=models.SweepResponse)
    def pde_sweep(req: models.PdeSweepRequest):
        return guarded(handlers.pde_sweep, req)

    @app.post("/functionals", response_model=models.FunctionalsResponse)
    def functionals(req: models.FunctionalsRequest):
        return guarded(handlers.functionals, req)

    @app.post("/fit", response_model=models.FitResponse)
    def fit(req: models.FitRequest):
        return guarded(handlers.fit, req)

    return app
