"""FastAPI application wrapping the toolkit.

Domain errors map to structured payloads: constraint/parse problems are 422,
resource-style failures (precision cap, budget) are 422 with their own codes,
and a soundness violation—which can only mean the implementation is wrong—is
surfaced as 500.  The CLI translates these codes to its exit statuses.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ExpMeasureError, SoundnessViolation
from . import handlers, schemas as S


def create_app() -> FastAPI:
    app = FastAPI(title="expmeasure",
                  description="Certified transcendence-measure toolkit for e^alpha",
                  version=S.TOOL_VERSION)

    @app.exception_handler(ExpMeasureError)
    async def _domain_error(_request: Request, exc: ExpMeasureError):
        status = 500 if isinstance(exc, SoundnessViolation) else 422
        return JSONResponse(
            status_code=status,
            content={"error": S.ErrorPayload(code=exc.code, message=str(exc)).model_dump()})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": S.TOOL_VERSION}

    @app.post("/v1/exponent/table", response_model=S.ExponentResponse,
              response_model_by_alias=True)
    def exponent_table(req: S.ExponentRequest):
        return handlers.handle_exponent(req)

    @app.post("/v1/bound", response_model=S.BoundResponse, response_model_by_alias=True)
    def bound(req: S.BoundRequest):
        return handlers.handle_bound(req)

    @app.post("/v1/verify", response_model=S.VerifyResponse, response_model_by_alias=True)
    def verify(req: S.VerifyRequest):
        return handlers.handle_verify(req)

    @app.post("/v1/approximants", response_model=S.ApproximantsResponse,
              response_model_by_alias=True)
    def approximants(req: S.ApproximantsRequest):
        return handlers.handle_approximants(req)

    @app.post("/v1/certificate", response_model=S.CertificateResponse,
              response_model_by_alias=True)
    def certificate(req: S.CertificateRequest):
        return handlers.handle_certificate(req)

    @app.post("/v1/scan/parity", response_model=S.ParityScanResponse,
              response_model_by_alias=True)
    def scan_parity(req: S.ParityScanRequest):
        return handlers.handle_parity_scan(req)

    @app.post("/v1/scan/floor-identity", response_model=S.FloorScanResponse,
              response_model_by_alias=True)
    def scan_floor(req: S.FloorScanRequest):
        return handlers.handle_floor_scan(req)

    @app.post("/v1/scan/asymptotic", response_model=S.AsymptoticScanResponse,
              response_model_by_alias=True)
    def scan_asymptotic(req: S.AsymptoticScanRequest):
        return handlers.handle_asymptotic_scan(req)

    return app


app = create_app()
