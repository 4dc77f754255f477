"""JSON-over-HTTP facade over a loaded dataset.

Read-only endpoints under /api serve the weight-explorer UI and scripted
clients:

    GET  /api/vms                     the VM descriptors
    POST /api/rank                    ranking for a weight vector
    GET  /api/sweep?k=&mode=          top-k frequencies over all 1295 vectors
    POST /api/validate                empirical comparison for posted timings

Responses are computed from an immutable dataset snapshot, so identical
requests yield identical bodies. The built web UI, when present, is served
at /.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import DegenerateRanksError, PipelineError, VmRankError
from .model import (
    AttributeGroup,
    CorrelationMethod,
    MeasurementSet,
    Mode,
    RankTable,
    TimingRecord,
    TimingSet,
    WeightVector,
)
from .scoring import ScoringContext
from .sweep import SweepResult, top_k_frequency
from .validation import compare, divergence_report, rank_empirical

ModeLiteral = Literal["sequential", "parallel"]


class DatasetSnapshot:
    """One loaded dataset plus lazily computed, cached derived state.

    Everything is read-only after construction; the context and sweep
    caches are filled idempotently (same key always computes the same
    value), so concurrent requests may race on insertion without harm.
    """

    def __init__(self, measurements: MeasurementSet):
        self.measurements = measurements
        self._contexts: dict[Mode, ScoringContext] = {}
        self._sweeps: dict[tuple[int, Mode], SweepResult] = {}
        self._lock = threading.Lock()

    def context(self, mode: Mode) -> ScoringContext:
        ctx = self._contexts.get(mode)
        if ctx is None:
            ctx = ScoringContext.prepare(self.measurements, mode)
            with self._lock:
                ctx = self._contexts.setdefault(mode, ctx)
        return ctx

    def sweep(self, k: int, mode: Mode) -> SweepResult:
        key = (k, mode)
        result = self._sweeps.get(key)
        if result is None:
            result = top_k_frequency(self.measurements, k, mode)
            with self._lock:
                result = self._sweeps.setdefault(key, result)
        return result


def build_snapshot(measurements: MeasurementSet) -> DatasetSnapshot:
    return DatasetSnapshot(measurements)


class VmModel(BaseModel):
    id: str
    vcpus: int
    memory_gib: float
    processor: str
    clock_ghz: float


class RankRequest(BaseModel):
    weights: list[int]
    mode: ModeLiteral = "sequential"


class RankEntryModel(BaseModel):
    vm: str
    score: float
    rank: int
    contributions: dict[str, float]


class RankResponse(BaseModel):
    kind: str
    mode: ModeLiteral
    weights: list[int]
    entries: list[RankEntryModel]


class SweepVmModel(BaseModel):
    vm: str
    rank_counts: dict[int, int]
    top_k_count: int
    top_k_frequency: float


class SweepResponse(BaseModel):
    total_vectors: int
    k: int
    mode: ModeLiteral
    per_vm: list[SweepVmModel]


class TimingModel(BaseModel):
    vm: str
    seconds: float = Field(gt=0)


class ValidateRequest(BaseModel):
    weights: list[int]
    mode: ModeLiteral = "sequential"
    timings: list[TimingModel]
    method: Literal["pearson_on_ranks", "spearman_average_ranks", "kendall_tau"] = (
        "pearson_on_ranks")
    top_k: int = 3
    divergence_threshold: int = 3


class PublishedEntryModel(BaseModel):
    vm: str
    score: float | None
    rank: int


class TableModel(BaseModel):
    kind: str
    entries: list[PublishedEntryModel]


class DivergenceFlagModel(BaseModel):
    vm: str
    rank_a: int
    rank_b: int
    delta: int
    suspect_groups: list[str]


class ValidateResponse(BaseModel):
    method: str
    coefficient: float
    per_vm_delta: dict[str, int]
    top_k_overlap: int
    k: int
    benchmark: TableModel
    empirical: TableModel
    divergence: list[DivergenceFlagModel]


def _weights_or_400(raw: list[int]) -> WeightVector:
    try:
        return WeightVector(tuple(raw))  # type: ignore[arg-type]
    except ValueError as exc:
        raise HTTPException(
            status_code=400,
            detail={"field": "weights", "message": str(exc)})


def _table_model(table: RankTable) -> TableModel:
    return TableModel(
        kind=table.kind.value,
        entries=[PublishedEntryModel(vm=e.vm_id, score=e.score, rank=e.rank)
                 for e in table.entries])


def create_app(snapshot: DatasetSnapshot, ui_dist: str | Path | None = None,
               cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="vmrank", version="0.1.0",
                  description="Rank cloud VM types by expected application"
                              " performance.")
    app.state.snapshot = snapshot
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    def _snap(request: Request) -> DatasetSnapshot:
        return request.app.state.snapshot

    @app.get("/api/vms", response_model=list[VmModel])
    def get_vms(request: Request):
        snap = _snap(request)
        return [VmModel(**vm.to_dict()) for vm in snap.measurements.vms]

    @app.post("/api/rank", response_model=RankResponse)
    def post_rank(body: RankRequest, request: Request):
        snap = _snap(request)
        weights = _weights_or_400(body.weights)
        mode = Mode(body.mode)
        try:
            ctx = snap.context(mode)
            table = ctx.rank_table(weights)
            contrib = ctx.contributions(weights)
        except PipelineError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        entries = [
            RankEntryModel(
                vm=e.vm_id, score=e.score, rank=e.rank,
                contributions={g.value: contrib[e.vm_id][g] for g in AttributeGroup})
            for e in table.entries
        ]
        return RankResponse(kind=table.kind.value, mode=body.mode,
                            weights=list(weights), entries=entries)

    @app.get("/api/sweep", response_model=SweepResponse)
    def get_sweep(request: Request,
                  k: int = Query(default=3),
                  mode: ModeLiteral = Query(default="sequential")):
        snap = _snap(request)
        if k < 1:
            raise HTTPException(
                status_code=400,
                detail={"field": "k", "message": f"k must be >= 1, got {k}"})
        try:
            result = snap.sweep(k, Mode(mode))
        except VmRankError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        per_vm = [
            SweepVmModel(vm=vm, rank_counts=dict(sorted(counts.items())),
                         top_k_count=result.top_k_count(vm),
                         top_k_frequency=result.top_k_frequency(vm))
            for vm, counts in sorted(result.per_vm.items())
        ]
        return SweepResponse(total_vectors=result.total_vectors, k=result.k,
                             mode=mode, per_vm=per_vm)

    @app.post("/api/validate", response_model=ValidateResponse)
    def post_validate(body: ValidateRequest, request: Request):
        snap = _snap(request)
        weights = _weights_or_400(body.weights)
        if body.top_k < 1:
            raise HTTPException(
                status_code=400,
                detail={"field": "top_k", "message": "top_k must be >= 1"})
        if not body.timings:
            raise HTTPException(
                status_code=400,
                detail={"field": "timings", "message": "timings must be non-empty"})
        mode = Mode(body.mode)
        timings = TimingSet(tuple(
            TimingRecord(t.vm, mode, t.seconds) for t in body.timings))
        try:
            timings.check_vms(snap.measurements.vm_ids)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            ctx = snap.context(mode)
            benchmark = ctx.rank_table(weights)
            empirical = rank_empirical(timings, mode)
            report = compare(benchmark, empirical,
                             CorrelationMethod(body.method), k=body.top_k)
        except (PipelineError, DegenerateRanksError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        divergence = divergence_report(benchmark, empirical,
                                       threshold=body.divergence_threshold,
                                       group_scores=ctx.groups)
        return ValidateResponse(
            method=report.method.value,
            coefficient=report.coefficient,
            per_vm_delta=dict(sorted(report.per_vm_delta.items())),
            top_k_overlap=report.top_k_overlap,
            k=report.k,
            benchmark=_table_model(benchmark),
            empirical=_table_model(empirical),
            divergence=[DivergenceFlagModel(
                vm=f.vm_id, rank_a=f.rank_a, rank_b=f.rank_b, delta=f.delta,
                suspect_groups=[g.value for g in f.suspect_groups])
                for f in divergence.flags],
        )

    dist = Path(ui_dist) if ui_dist else None
    if dist and dist.is_dir():
        app.mount("/", StaticFiles(directory=dist, html=True), name="ui")
    else:
        @app.get("/")
        def root():
            return {"service": "vmrank",
                    "endpoints": ["/api/vms", "/api/rank", "/api/sweep",
                                  "/api/validate"]}

    return app
