"""Request and response schemas for the verification service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class VerifyRankRequest(BaseModel):
    fn: str
    set_expr: str = Field(alias="set")
    max_len: int = 10
    budget: int | None = None
    recheck: bool = False

    model_config = {"populate_by_name": True}


class VerifyCompressRequest(BaseModel):
    fn: str
    set_expr: str = Field(alias="set")
    max_len: int = 10
    cover_count: int = 0
    budget: int | None = None
    recheck: bool = False

    model_config = {"populate_by_name": True}


class Verify1ttRequest(BaseModel):
    reduction: str
    set_expr: str = Field(alias="set")
    set2_expr: str = Field(alias="set2")
    max_len: int = 8
    budget: int | None = None

    model_config = {"populate_by_name": True}


class ConstructRequest(BaseModel):
    tag: str
    set_expr: str | None = Field(default=None, alias="set")
    max_len: int = 8
    budget: int | None = None

    model_config = {"populate_by_name": True}


class DecideRequest(BaseModel):
    proc: str
    set_expr: str = Field(alias="set")
    x: str
    budget: int | None = None

    model_config = {"populate_by_name": True}


class DiagonalizeRequest(BaseModel):
    count: int = 20
    stage_budget: int = 10_000
    horizon: int = 1_000
    audit: bool = True
    budget: int | None = None


class IsomorphismRequest(BaseModel):
    f: str
    g: str
    set_expr: str = Field(alias="set")
    set2_expr: str = Field(alias="set2")
    n: int = 64
    budget: int | None = None

    model_config = {"populate_by_name": True}


class CommandResponse(BaseModel):
    """Uniform envelope: exit-style status plus the command's report."""

    status: int
    report: dict


class Health(BaseModel):
    ok: bool = True
    version: str
