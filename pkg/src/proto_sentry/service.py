"""HTTP service exposing the analyses over JSON.

Requests carry the source files inline, so the server needs no access to
the client's filesystem and a response depends only on the request body.
The CLI is a thin client of this app, talking to it in-process by default.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import analysis
from .frontend.parser import ParseError
from .frontend.lexer import LexError
from .reporting import REPORT_VERSION
from .taint.summaries import SummaryError

SERVICE_VERSION = "0.1.0"


# -- request bodies ----------------------------------------------------------------


class FileEntry(BaseModel):
    path: str
    text: str


class ScanRequest(BaseModel):
    files: list[FileEntry]
    query: Literal["general", "priority"] = "priority"
    mode: Literal["exported", "any"] = "exported"
    context_depth: int = Field(default=1, ge=0)
    budget: int | None = Field(default=None, ge=1)
    return_pruning: bool = True
    test_globs: list[str] | None = None
    client_globs: list[str] | None = None
    summaries: dict | None = None
    disable_summaries: list[str] | None = None
    lint: bool = True


class EntryPointsRequest(BaseModel):
    files: list[FileEntry]
    query: Literal["general", "priority"] = "priority"
    limit: int = Field(default=5, ge=1)
    context_depth: int = Field(default=1, ge=0)
    budget: int | None = Field(default=None, ge=1)
    test_globs: list[str] | None = None
    client_globs: list[str] | None = None
    summaries: dict | None = None
    disable_summaries: list[str] | None = None


class GadgetsRequest(BaseModel):
    files: list[FileEntry]
    properties: list[str]
    entry_set: list[str] | None = None
    sinks: list[str] | None = None
    unresolved_callees: bool = True
    context_depth: int = Field(default=1, ge=0)
    budget: int | None = Field(default=None, ge=1)
    summaries: dict | None = None
    disable_summaries: list[str] | None = None


class PropsRequest(BaseModel):
    files: list[FileEntry]
    include_object_keys: bool = True


class ScoreRequest(BaseModel):
    reports: dict[str, list[dict]]
    manifest: dict


# -- response documents -------------------------------------------------------------


class SpanModel(BaseModel):
    path: str
    start: int
    end: int


class StepModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    from_: SpanModel = Field(alias="from")
    to: SpanModel
    rule: str


class ControlledModel(BaseModel):
    base: bool
    propertyName: bool
    value: bool


class FindingModel(BaseModel):
    kind: Literal["general", "priority"]
    location: str
    span: SpanModel
    mode: Literal["exported", "any"]
    controlled: ControlledModel
    flow: list[StepModel]
    alternates: int
    tags: list[str]


class LintModel(BaseModel):
    location: str
    span: SpanModel
    snippet: str


class FindingsReport(BaseModel):
    version: int
    query: Literal["general", "priority"]
    mode: Literal["exported", "any"]
    incomplete: bool
    findings: list[FindingModel]
    lints: list[LintModel]


class CallEdgeModel(BaseModel):
    caller: str
    site: list[int]
    callee: str


class EntryPathModel(BaseModel):
    entry: str
    steps: list[CallEdgeModel]
    target: str


class EntryFindingModel(FindingModel):
    entry_paths: list[EntryPathModel]


class EntryPointsReport(BaseModel):
    version: int
    query: Literal["general", "priority"]
    mode: Literal["any"]
    incomplete: bool
    findings: list[EntryFindingModel]


class ReadSiteModel(SpanModel):
    location: str


class GadgetSinkModel(SpanModel):
    location: str
    callee: str
    arg_index: int
    labels: list[str]


class GadgetFindingModel(BaseModel):
    property: str
    read_site: ReadSiteModel
    seed_kind: Literal["member-read", "destructuring", "indexed", "for-in"]
    entry: str
    sink: GadgetSinkModel
    flow: list[StepModel]


class GadgetReport(BaseModel):
    version: int
    properties: list[str]
    incomplete: bool
    findings: list[GadgetFindingModel]
    affected_exports: dict[str, list[str]]


class PropsReport(BaseModel):
    version: int
    properties: list[str]
    metadata: dict


class FixtureScore(BaseModel):
    tp: int
    fp: int
    fn: int
    missed: list[str]
    unexpected: list[str]


class ScoreReportModel(BaseModel):
    version: int
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    per_fixture: dict[str, FixtureScore]


class Health(BaseModel):
    status: Literal["ok"]
    service: str
    report_version: int


# -- app ----------------------------------------------------------------------------

app = FastAPI(title="proto-sentry", version=SERVICE_VERSION)

_INPUT_ERRORS = (ParseError, LexError, SummaryError, ValueError, KeyError)


def _pairs(files: list[FileEntry]) -> list[tuple[str, str]]:
    return [(f.path, f.text) for f in files]


@app.get("/health", response_model=Health)
def health() -> Health:
    return Health(status="ok", service=SERVICE_VERSION,
                  report_version=REPORT_VERSION)


@app.post("/v1/scan", response_model=FindingsReport)
def scan(request: ScanRequest) -> dict:
    try:
        return analysis.run_scan(
            _pairs(request.files),
            query=request.query,
            mode=request.mode,
            context_depth=request.context_depth,
            budget=request.budget,
            return_pruning=request.return_pruning,
            test_globs=request.test_globs,
            client_globs=request.client_globs,
            summaries_doc=request.summaries,
            disable_summaries=request.disable_summaries,
            lint=request.lint,
        )
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/v1/entrypoints", response_model=EntryPointsReport)
def entrypoints(request: EntryPointsRequest) -> dict:
    try:
        return analysis.run_entrypoints(
            _pairs(request.files),
            query=request.query,
            limit=request.limit,
            context_depth=request.context_depth,
            budget=request.budget,
            test_globs=request.test_globs,
            client_globs=request.client_globs,
            summaries_doc=request.summaries,
            disable_summaries=request.disable_summaries,
        )
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/v1/gadgets", response_model=GadgetReport)
def gadgets(request: GadgetsRequest) -> dict:
    try:
        return analysis.run_gadgets(
            _pairs(request.files),
            properties=request.properties,
            entry_set=request.entry_set,
            explicit_sinks=request.sinks,
            unresolved_callees=request.unresolved_callees,
            context_depth=request.context_depth,
            budget=request.budget,
            summaries_doc=request.summaries,
            disable_summaries=request.disable_summaries,
        )
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/v1/props", response_model=PropsReport)
def props(request: PropsRequest) -> dict:
    try:
        return analysis.run_props(
            _pairs(request.files),
            include_object_keys=request.include_object_keys,
        )
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/v1/score", response_model=ScoreReportModel)
def score(request: ScoreRequest) -> dict:
    try:
        return analysis.run_score(request.reports, request.manifest)
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
