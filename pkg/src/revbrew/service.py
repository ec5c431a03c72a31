"""Job-oriented HTTP service for the browser workbench.

Thin orchestration over the engines: jobs go into a bounded queue, a single
worker thread executes them one at a time, progress streams out as
server-sent events, and completed runs are persisted as ordinary result
files. The in-memory registry guards every read/write with a lock, so
status reads are consistent snapshots. Queued jobs are lost on restart;
completed result files are written atomically and survive.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, ConfigDict, Field

from revbrew import analysis
from revbrew.model import Inventory, evaluate_recipe
from revbrew.workbench import experiments
from revbrew.workbench.workspace import (
    Workspace,
    WorkspaceError,
    inventory_from_doc,
    inventory_to_doc,
    targets_to_doc,
)

DEFAULT_PROGRESS_STRIDE = 10
DEFAULT_QUEUE_SIZE = 16


class JobSpec(BaseModel):
    """Submission payload; unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")

    product: Union[str, int]
    algorithm: str = "nsga2"
    seed: int = 1
    config: dict = Field(default_factory=dict)
    inventory: Optional[dict] = None
    success_threshold: float = analysis.DEFAULT_SUCCESS_THRESHOLD


class DistanceMatrixRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    solutions: list[list[float]]
    labels: Optional[list[str]] = None
    normalize: bool = False


@dataclass
class Job:
    id: str
    spec: JobSpec
    state: str = "queued"  # queued -> running -> done | failed
    progress: int = 0
    total_generations: Optional[int] = None
    events: list = field(default_factory=list)
    summary: Optional[dict] = None
    error: Optional[str] = None
    result_file: Optional[str] = None
    condition: threading.Condition = field(default_factory=threading.Condition)

    def snapshot(self) -> dict:
        with self.condition:
            return {
                "id": self.id,
                "product": self.spec.product,
                "algorithm": self.spec.algorithm,
                "seed": self.spec.seed,
                "state": self.state,
                "progress": self.progress,
                "total_generations": self.total_generations,
                "summary": self.summary,
                "error": self.error,
                "result_file": self.result_file,
            }


class JobRunner:
    """Bounded queue plus the single worker thread that drains it."""

    def __init__(self, app_state, queue_size: int = DEFAULT_QUEUE_SIZE,
                 progress_stride: int = DEFAULT_PROGRESS_STRIDE):
        self.state = app_state
        self.queue: queue.Queue = queue.Queue(maxsize=queue_size)
        self.progress_stride = max(1, progress_stride)
        self.jobs: dict[str, Job] = {}
        self.lock = threading.Lock()
        self._thread: Optional[threading.Thread] = None
        self._stop = threading.Event()

    def start(self):
        if self._thread is None:
            self._thread = threading.Thread(target=self._work, daemon=True,
                                            name="revbrew-job-worker")
            self._thread.start()

    def stop(self):
        self._stop.set()
        try:
            # wake the worker if it is idle in get(); when the queue is full
            # the worker is busy and re-checks the stop flag on its own
            self.queue.put_nowait(None)
        except queue.Full:
            pass

    def submit(self, spec: JobSpec) -> Job:
        job = Job(id=uuid.uuid4().hex, spec=spec)
        if "generations" in spec.config:
            job.total_generations = int(spec.config["generations"])
        elif spec.algorithm == "nsga2":
            job.total_generations = int(
                self.state.workspace.nsga_defaults.get("generations", 1000))
        try:
            with self.lock:
                self.jobs[job.id] = job
            self.queue.put_nowait(job)
        except queue.Full:
            with self.lock:
                del self.jobs[job.id]
            raise HTTPException(status_code=503, detail="job queue is full")
        return job

    def get(self, job_id: str) -> Job:
        with self.lock:
            job = self.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job id {job_id!r}")
        return job

    def _emit(self, job: Job, event: dict):
        with job.condition:
            job.events.append(event)
            job.condition.notify_all()

    def _work(self):
        while not self._stop.is_set():
            job = self.queue.get()
            if job is None:
                continue
            self._execute(job)

    def _execute(self, job: Job):
        spec = job.spec
        with job.condition:
            job.state = "running"
        try:
            ws: Workspace = self.state.workspace
            inventory = (inventory_from_doc(spec.inventory)
                         if spec.inventory is not None else ws.inventory)
            overrides = dict(spec.config)

            def on_generation(gen: int, best_e: float, front0: int):
                with job.condition:
                    job.progress = gen
                if gen % self.progress_stride == 0 or gen == job.total_generations:
                    self._emit(job, {"type": "progress", "generation": gen,
                                     "best_e": best_e, "front0_size": front0})

            result, target = experiments.run_single(
                ws, spec.product, spec.algorithm, spec.seed,
                nsga_overrides=overrides if spec.algorithm == "nsga2" else None,
                de_overrides=overrides if spec.algorithm == "de" else None,
                inventory=inventory,
                on_generation=on_generation,
            )
            summary = analysis.summarize_run(result, spec.success_threshold)
            doc = experiments.result_to_doc(result, target, inventory, ws.brew,
                                            spec.success_threshold)
            index = next(
                (i + 1 for i, t in enumerate(ws.targets) if t.name == target.name),
                0,
            )
            filename = f"job-{job.id}__" + experiments.result_filename(
                index, target.name, spec.algorithm, spec.seed)
            path = Path(self.state.result_dir) / filename
            experiments.save_result(doc, path)

            with job.condition:
                job.state = "done"
                job.result_file = str(path)
                job.summary = {
                    "nondominated_count": summary.nondominated_count,
                    "successful_count": summary.successful_count,
                    "best_e": float(result.errors().min()),
                    "evaluations_used": result.evaluations_used,
                }
                self.state.completed[job.id] = (result, target, inventory,
                                                spec.success_threshold)
            self._emit(job, {"type": "done", **job.summary})
        except (WorkspaceError, ValueError) as exc:
            self._fail(job, f"{exc}")
        except Exception as exc:  # noqa: BLE001 - reported on the job
            self._fail(job, f"{type(exc).__name__}: {exc}")

    def _fail(self, job: Job, message: str):
        with job.condition:
            job.state = "failed"
            job.error = message
        self._emit(job, {"type": "failed", "message": message})


class _AppState:
    def __init__(self, workspace: Workspace, result_dir: Path):
        self.workspace = workspace
        self.result_dir = Path(result_dir)
        self.completed: dict = {}
        self.workspace_lock = threading.Lock()


def create_app(
    workspace: Workspace,
    result_dir="service-results",
    queue_size: int = DEFAULT_QUEUE_SIZE,
    progress_stride: int = DEFAULT_PROGRESS_STRIDE,
) -> FastAPI:
    state = _AppState(workspace, Path(result_dir))
    runner = JobRunner(state, queue_size=queue_size, progress_stride=progress_stride)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        state.result_dir.mkdir(parents=True, exist_ok=True)
        runner.start()
        yield
        runner.stop()

    app = FastAPI(title="revbrew service", lifespan=lifespan)
    app.state.brew_state = state
    app.state.runner = runner

    def _validate_spec(spec: JobSpec):
        ws = state.workspace
        if spec.algorithm not in ("nsga2", "de"):
            raise HTTPException(
                status_code=422,
                detail="field 'algorithm' must be 'nsga2' or 'de'")
        try:
            ws.target(spec.product)
        except WorkspaceError as exc:
            raise HTTPException(status_code=422,
                                detail=f"field 'product': {exc}") from exc
        try:
            if spec.algorithm == "nsga2":
                ws.nsga_config(spec.seed, **spec.config)
            else:
                ws.de_config(spec.seed, **spec.config)
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=422,
                                detail=f"field 'config': {exc}") from exc
        if spec.inventory is not None:
            try:
                inventory_from_doc(spec.inventory)
            except WorkspaceError as exc:
                raise HTTPException(status_code=422,
                                    detail=f"field 'inventory': {exc}") from exc
        if spec.success_threshold < 0:
            raise HTTPException(status_code=422,
                                detail="field 'success_threshold' must be >= 0")

    @app.post("/api/jobs", status_code=201)
    def submit_job(spec: JobSpec):
        _validate_spec(spec)
        job = runner.submit(spec)
        return job.snapshot()

    @app.get("/api/jobs")
    def list_jobs():
        with runner.lock:
            jobs = list(runner.jobs.values())
        return [job.snapshot() for job in jobs]

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        return runner.get(job_id).snapshot()

    @app.get("/api/jobs/{job_id}/solutions")
    def job_solutions(job_id: str):
        job = runner.get(job_id)
        snap = job.snapshot()
        if snap["state"] != "done":
            raise HTTPException(status_code=409,
                                detail=f"job is {snap['state']}, not done")
        result, target, inventory, threshold = state.completed[job_id]
        front0 = np.flatnonzero(result.ranks == 0)
        errors = result.errors()
        solutions = []
        for i in front0:
            genome = result.genomes[i]
            props = evaluate_recipe(genome, inventory, state.workspace.brew)
            solutions.append({
                "genome": genome.tolist(),
                "objectives": {
                    "f1": float(result.objectives[i, 0]),
                    "f2": float(result.objectives[i, 1]),
                    "f3": float(result.objectives[i, 2]),
                },
                "error": float(errors[i]),
                "successful": bool(errors[i] <= threshold),
                "properties": {
                    "og": props.og, "fg": props.fg, "abv": props.abv,
                    "ibu": props.ibu,
                    "ibu_gu": None if np.isnan(props.ibu_gu) else props.ibu_gu,
                    "mcu": props.mcu, "srm": props.srm, "ebc": props.ebc,
                },
            })
        return {
            "job_id": job_id,
            "product": target.name,
            "ingredient_names": list(inventory.names),
            "bounds": inventory.bounds().tolist(),
            "threshold": threshold,
            "solutions": solutions,
        }

    @app.get("/api/jobs/{job_id}/events")
    def job_events(job_id: str, after: int = 0):
        job = runner.get(job_id)

        def stream():
            cursor = 0
            while True:
                with job.condition:
                    while cursor >= len(job.events):
                        if job.state in ("done", "failed"):
                            return  # terminal event already delivered
                        job.condition.wait(timeout=30.0)
                    pending = job.events[cursor:]
                    cursor = len(job.events)
                for event in pending:
                    if (event["type"] == "progress"
                            and event["generation"] <= after):
                        continue
                    yield f"data: {json.dumps(event)}\n\n"
                    if event["type"] in ("done", "failed"):
                        return

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/workspace")
    def get_workspace():
        with state.workspace_lock:
            ws = state.workspace
        return {
            "inventory": inventory_to_doc(ws.inventory),
            "targets": targets_to_doc(ws.targets)["targets"],
            "brew": {
                "efficiency": ws.brew.efficiency,
                "batch_size_l": ws.brew.batch_size,
                "boil_size_l": ws.brew.boil_size,
                "boil_time_min": ws.brew.boil_time,
            },
            "nsga2": dict(ws.nsga_defaults),
            "de": dict(ws.de_defaults),
        }

    @app.put("/api/workspace/inventory")
    def put_inventory(doc: dict):
        try:
            inventory: Inventory = inventory_from_doc(doc)
        except WorkspaceError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        with state.workspace_lock:
            state.workspace = state.workspace.with_inventory(inventory)
        return {"inventory": inventory_to_doc(inventory),
                "dimension": inventory.dimension}

    @app.post("/api/analysis/distance-matrix")
    def distance_matrix_endpoint(req: DistanceMatrixRequest):
        try:
            X = np.asarray(req.solutions, dtype=float)
            if X.ndim != 2 or X.shape[0] == 0:
                raise ValueError("solutions must be a non-empty matrix")
            bounds = None
            if req.normalize:
                with state.workspace_lock:
                    bounds = state.workspace.inventory.bounds()
                if X.shape[1] != bounds.shape[0]:
                    raise ValueError(
                        "solutions do not match the inventory dimension")
            dm = analysis.distance_matrix(X, labels=req.labels, bounds=bounds)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "labels": list(dm.labels),
            "values": dm.values.tolist(),
            "max_off_diagonal": dm.max_off_diagonal,
        }

    return app


def serve(workspace: Workspace, host: str = "127.0.0.1", port: int = 8000,
          result_dir="service-results"):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    app = create_app(workspace, result_dir=result_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
