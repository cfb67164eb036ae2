"""HTTP service exposing the toolkit as JSON endpoints.

Run with ``uvicorn privpool.service:app`` or ``privpool serve``. Endpoints are
pure request/response computations; clients that want CSV artifacts render
them from the JSON rows with the helpers in :mod:`privpool.experiment` (the
bundled CLI does exactly that).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, experiment, schemas

__all__ = ["create_app", "app"]


def create_app() -> FastAPI:
    app = FastAPI(
        title="privpool",
        version=__version__,
        description=(
            "Privacy-preserving pooled sequencing: sizing rules, exact leakage "
            "accounting, and seeded Monte Carlo reconstruction runs."
        ),
    )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/bounds", response_model=schemas.BoundsResponse)
    def bounds(req: schemas.BoundsRequest) -> schemas.BoundsResponse:
        return experiment.run_bounds(req)

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
        return experiment.run_simulate(req)

    @app.post("/leakage", response_model=schemas.LeakageResponse)
    def leakage(req: schemas.LeakageRequest) -> schemas.LeakageResponse:
        return experiment.run_leakage(req)

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
        return experiment.run_sweep(req)

    return app


app = create_app()
