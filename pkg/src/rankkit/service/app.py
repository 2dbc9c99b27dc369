"""FastAPI wrapper around the workbench commands.

Commands that execute, whatever their verdict, answer HTTP 200 with an
exit-style status inside the body; refutations are results, not transport
errors.  Only malformed requests surface as HTTP errors.
"""

from __future__ import annotations

from fastapi import FastAPI

from .. import api
from ..__init__ import __version__
from .models import (
    CommandResponse,
    ConstructRequest,
    DecideRequest,
    DiagonalizeRequest,
    Health,
    IsomorphismRequest,
    Verify1ttRequest,
    VerifyCompressRequest,
    VerifyRankRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="rankkit", version=__version__)

    @app.get("/healthz", response_model=Health)
    def healthz() -> Health:
        return Health(version=__version__)

    @app.post("/verify/rank", response_model=CommandResponse)
    def verify_rank(req: VerifyRankRequest) -> CommandResponse:
        status, report = api.cmd_verify_rank(
            req.fn, req.set_expr, req.max_len, req.budget, req.recheck
        )
        return CommandResponse(status=status, report=report)

    @app.post("/verify/compress", response_model=CommandResponse)
    def verify_compress(req: VerifyCompressRequest) -> CommandResponse:
        status, report = api.cmd_verify_compress(
            req.fn, req.set_expr, req.max_len, req.cover_count, req.budget, req.recheck
        )
        return CommandResponse(status=status, report=report)

    @app.post("/verify/1tt", response_model=CommandResponse)
    def verify_1tt(req: Verify1ttRequest) -> CommandResponse:
        status, report = api.cmd_verify_1tt(
            req.reduction, req.set_expr, req.set2_expr, req.max_len, req.budget
        )
        return CommandResponse(status=status, report=report)

    @app.post("/construct", response_model=CommandResponse)
    def construct(req: ConstructRequest) -> CommandResponse:
        status, report = api.cmd_construct(req.tag, req.set_expr, req.max_len, req.budget)
        return CommandResponse(status=status, report=report)

    @app.post("/decide", response_model=CommandResponse)
    def decide(req: DecideRequest) -> CommandResponse:
        status, report = api.cmd_decide(req.proc, req.set_expr, req.x, req.budget)
        return CommandResponse(status=status, report=report)

    @app.post("/diagonalize", response_model=CommandResponse)
    def diagonalize(req: DiagonalizeRequest) -> CommandResponse:
        status, report = api.cmd_diagonalize(
            req.count, req.stage_budget, req.horizon, req.audit, req.budget
        )
        return CommandResponse(status=status, report=report)

    @app.post("/isomorphism", response_model=CommandResponse)
    def isomorphism(req: IsomorphismRequest) -> CommandResponse:
        status, report = api.cmd_isomorphism(
            req.f, req.g, req.set_expr, req.set2_expr, req.n, req.budget
        )
        return CommandResponse(status=status, report=report)

    return app
