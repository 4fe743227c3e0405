"""Client used by the CLI: same request/response models either way.

Without a URL the handlers run in process, which keeps the tool usable as
a standalone program; with a URL every call is an HTTP POST to a running
service. Long sweeps are expected, so remote calls carry no timeout.
"""
from __future__ import annotations

import httpx

from .errors import ConfigError, NumericalError
from .service import handlers, models


class LabClient:
    def __init__(self, url: str | None = None):
        self.url = url.rstrip("/") if url else None

    def _call(self, path: str, handler, req, response_model):
        if self.url is None:
            return handler(req)
        resp = httpx.post(
            f"{self.url}{path}", json=req.model_dump(mode="json"), timeout=None
        )
        if resp.status_code in (400, 422):
            raise ConfigError(str(resp.json().get("detail", resp.text)))
        if resp.status_code >= 500:
            raise NumericalError(str(resp.json().get("detail", resp.text)))
        resp.raise_for_status()
        return response_model.model_validate(resp.json())

    def kernel_check(self, req: models.KernelCheckRequest) -> models.KernelCheckResponse:
        return self._call("/kernel-check", handlers.kernel_check, req, models.KernelCheckResponse)

    def ode_sweep(self, req: models.OdeSweepRequest) -> models.SweepResponse:
        return self._call("/ode-sweep", handlers.ode_sweep, req, models.SweepResponse)

    def pde_sweep(self, req: models.PdeSweepRequest) -> models.SweepResponse:
        return self._call("/pde-sweep", handlers.pde_sweep, req, models.SweepResponse)

    def functionals(self, req: models.FunctionalsRequest) -> models.FunctionalsResponse:
        return self._call("/functionals", handlers.functionals, req, models.FunctionalsResponse)

    def fit(self, req: models.FitRequest) -> models.FitResponse:
        return self._call("/fit", handlers.fit, req, models.FitResponse)
