"""HTTP facade: sessions, grid snapshots, evolve jobs, export.

Every response carries a schema_version field. Mutating endpoints on
one session are serialized by a per-session lock; a second mutation
while one is in flight gets 409 busy instead of interleaving. Evolve
runs as a background job: the POST returns a job id immediately and
the job endpoint is polled for the step report. Grid snapshots are
rebuilt after each mutation and served from cache, so repeated reads
return byte-identical bodies.

Run with `python -m voxelites.service` (VOXELITES_HOST / VOXELITES_PORT
override the bind address) or point uvicorn at voxelites.service:app.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel

from .archive import BinIndex
from .config import EngineConfig
from .density import fitness as density_fitness
from .hull import build_hull
from .ple import EmitterConfig, preset
from .session import Session, SessionError
from .voxel import FUNCTIONAL_TYPES, descriptors, export_blueprint

SCHEMA_VERSION = 1


class CreateSessionBody(BaseModel):
    mode: str = "user"
    seed: int = 0
    n_steps: Optional[int] = None
    emitter: Optional[str | dict] = None
    config: Optional[dict] = None


class EvolveBody(BaseModel):
    bin: Optional[list[int]] = None
    random: bool = False


class PatchConfigBody(BaseModel):
    emitter: Optional[str | dict] = None
    n_steps: Optional[int] = None
    safe_mode: Optional[bool] = None


class SessionRuntime:
    """One live session plus its lock, jobs, and cached snapshot."""

    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()
        self.jobs: dict[str, dict] = {}
        self.created_at = time.time()
        self.grid_cache: dict | None = None
        self.refresh_grid()

    def refresh_grid(self) -> None:
        self.grid_cache = build_grid_snapshot(self.session)


def _parse_bin(raw: str) -> BinIndex:
    try:
        i, j, d = (int(v) for v in raw.split("-"))
        return (i, j, d)
    except ValueError:
        raise HTTPException(400, detail=f"bad bin address {raw!r}; use 'i-j-depth'")


def _bin_str(b: BinIndex) -> str:
    return f"{b[0]}-{b[1]}-{b[2]}"


def build_grid_snapshot(session: Session) -> dict:
    c = session.container
    cells = []
    for idx in c.all_bins():
        b = c.bins[idx]
        elite = b.elite
        feasible_fits = [s.fitness for s in b.feasible]
        cell: dict[str, Any] = {
            "index": list(idx),
            "bin": _bin_str(idx),
            "depth": idx[2],
            "bounds": list(b.bounds),
            "occupied": b.count > 0,
            "n_feasible": len(b.feasible),
            "n_infeasible": len(b.infeasible),
            "age": b.creation_iteration,
            "elite": None
            if elite is None
            else {
                "id": elite.id,
                "fitness": elite.fitness,
                "bc": [float(elite.bc[0]), float(elite.bc[1])],
            },
            "mean_fitness": (
                sum(feasible_fits) / len(feasible_fits) if feasible_fits else None
            ),
            "min_violation": (
                min(s.violation for s in b.infeasible) if b.infeasible else None
            ),
        }
        cells.append(cell)
    stats = c.stats()
    return {
        "schema_version": SCHEMA_VERSION,
        "iteration": session.T,
        "mode": session.mode,
        "n_steps": session.n_steps,
        "emitter": session.emitter.config.name,
        "rect": [list(c.rect[0]), list(c.rect[1])],
        "base_resolution": list(c.base_resolution),
        "stats": stats,
        "coverage": stats["n_occupied"] / stats["n_bins"],
        "cells": cells,
    }


def solution_payload(session: Session, bin_index: BinIndex, interior: bool) -> dict:
    b = session.container.bins.get(bin_index)
    if b is None or b.count == 0:
        raise HTTPException(404, detail=f"bin {_bin_str(bin_index)} is not occupied")
    sol = b.elite or b.infeasible[0]
    raw = sol.phenotype
    shown = raw if interior or raw.is_empty else build_hull(raw)
    blocks = [
        {
            "x": c[0],
            "y": c[1],
            "z": c[2],
            "type": t,
            "functional": t in FUNCTIONAL_TYPES,
            "orientation": list(shown.orientations.get(c, (1, 0, 0))),
        }
        for c, t in sorted(shown.blocks.items())
    ]
    desc = None if raw.is_empty else descriptors(raw)
    return {
        "schema_version": SCHEMA_VERSION,
        "bin": _bin_str(bin_index),
        "interior": interior,
        "solution": {
            "id": sol.id,
            "feasible": sol.feasible,
            "fitness": sol.fitness,
            "violation": sol.violation,
            "bc": [float(sol.bc[0]), float(sol.bc[1])],
            "genotype_length": len(sol.genotype),
            "axes": list(raw.axes_sorted) if not raw.is_empty else None,
            "descriptors": None
            if desc is None
            else {
                "functional_ratio": desc.functional_ratio,
                "filled_ratio": desc.filled_ratio,
                "major_medium_ratio": desc.major_medium_ratio,
                "major_smallest_ratio": desc.major_smallest_ratio,
            },
            "block_count": len(blocks),
            "blocks": blocks,
        },
    }


def create_app(default_config: EngineConfig | None = None) -> FastAPI:
    app = FastAPI(title="voxelites", version=str(SCHEMA_VERSION))
    sessions: dict[str, SessionRuntime] = {}
    app.state.sessions = sessions
    app.state.default_config = default_config

    def runtime(session_id: str) -> SessionRuntime:
        rt = sessions.get(session_id)
        if rt is None:
            raise HTTPException(404, detail=f"no session {session_id!r}")
        return rt

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            if body.config is None and app.state.default_config is not None:
                import copy

                engine = copy.deepcopy(app.state.default_config)
            else:
                engine = EngineConfig.from_dict(body.config or {})
            if body.emitter is not None:
                engine.emitter = (
                    preset(body.emitter)
                    if isinstance(body.emitter, str)
                    else EmitterConfig.from_dict(body.emitter)
                )
            if body.n_steps is not None:
                engine.n_steps = body.n_steps
            session = engine.build_session(seed=body.seed, mode=body.mode)
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(400, detail=str(exc))
        session_id = uuid.uuid4().hex[:16]
        rt = SessionRuntime(session)
        sessions[session_id] = rt
        return {
            "schema_version": SCHEMA_VERSION,
            "session_id": session_id,
            "created_at": rt.created_at,
            "mode": session.mode,
            "grid": rt.grid_cache,
        }

    @app.get("/sessions/{session_id}/grid")
    def get_grid(session_id: str):
        return runtime(session_id).grid_cache

    @app.post("/sessions/{session_id}/evolve")
    def post_evolve(session_id: str, body: EvolveBody):
        rt = runtime(session_id)
        if body.random == (body.bin is not None):
            raise HTTPException(400, detail="pass exactly one of 'bin' or 'random'")
        if not rt.lock.acquire(blocking=False):
            raise HTTPException(409, detail="a step is already in flight")
        job_id = uuid.uuid4().hex[:12]
        job = {"job_id": job_id, "status": "running", "report": None, "error": None}
        rt.jobs[job_id] = job

        def work():
            try:
                if body.random:
                    report = rt.session.random_step()
                else:
                    report = rt.session.user_step(tuple(body.bin))
                outcome = ("done", report.to_dict(), None)
            except Exception as exc:  # background thread: report via the job record
                outcome = ("error", None, str(exc))
            finally:
                try:
                    rt.refresh_grid()
                finally:
                    rt.lock.release()
            # status settles only after the lock is free, so a poller that
            # sees a finished job can immediately issue the next mutation
            job["status"], job["report"], job["error"] = outcome

        threading.Thread(target=work, daemon=True).start()
        return {
            "schema_version": SCHEMA_VERSION,
            "job_id": job_id,
            "status_url": f"/sessions/{session_id}/jobs/{job_id}",
        }

    @app.get("/sessions/{session_id}/jobs/{job_id}")
    def get_job(session_id: str, job_id: str):
        rt = runtime(session_id)
        job = rt.jobs.get(job_id)
        if job is None:
            raise HTTPException(404, detail=f"no job {job_id!r}")
        return {"schema_version": SCHEMA_VERSION, **job}

    @app.get("/sessions/{session_id}/solutions/{bin_addr}")
    def get_solution(session_id: str, bin_addr: str, interior: bool = Query(False)):
        rt = runtime(session_id)
        with rt.lock:
            return solution_payload(rt.session, _parse_bin(bin_addr), interior)

    @app.post("/sessions/{session_id}/export/{bin_addr}")
    def post_export(session_id: str, bin_addr: str):
        rt = runtime(session_id)
        if not rt.lock.acquire(blocking=False):
            raise HTTPException(409, detail="a step is already in flight")
        try:
            bin_index = _parse_bin(bin_addr)
            b = rt.session.container.bins.get(bin_index)
            if b is None or b.count == 0:
                raise HTTPException(
                    404, detail=f"bin {_bin_str(bin_index)} is not occupied"
                )
            sol = b.elite or b.infeasible[0]
            raw = sol.phenotype
            if raw.is_empty:
                raise HTTPException(400, detail="cannot export an empty phenotype")
            hulled = build_hull(raw)
            desc_raw = descriptors(raw)
            fit_raw = rt.session.domain.densities.score(desc_raw)
            fit_hulled = rt.session.domain.densities.score(descriptors(hulled))
            doc = export_blueprint(
                hulled, desc=desc_raw, fitness=fit_raw, genotype=sol.genotype
            )
            doc["schema_version"] = SCHEMA_VERSION
            doc["metadata"]["bin"] = _bin_str(bin_index)
            doc["metadata"]["fitness_after_hull"] = fit_hulled
            doc["metadata"]["fitness_delta_after_hull"] = abs(fit_hulled - fit_raw)
            return doc
        finally:
            rt.lock.release()

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str, format: str = Query("json")):
        rt = runtime(session_id)
        if format == "csv":
            return Response(
                content=rt.session.metrics_csv(), media_type="text/csv"
            )
        return {
            "schema_version": SCHEMA_VERSION,
            "rows": rt.session.metrics,
        }

    @app.patch("/sessions/{session_id}/config")
    def patch_config(session_id: str, body: PatchConfigBody):
        rt = runtime(session_id)
        if rt.session.mode != "developer":
            raise HTTPException(
                403, detail="config changes require a developer-mode session"
            )
        if not rt.lock.acquire(blocking=False):
            raise HTTPException(409, detail="a step is already in flight")
        try:
            try:
                if body.emitter is not None:
                    cfg = (
                        preset(body.emitter)
                        if isinstance(body.emitter, str)
                        else EmitterConfig.from_dict(body.emitter)
                    )
                    rt.session.set_emitter(cfg)
                if body.n_steps is not None:
                    if body.n_steps < 0:
                        raise ValueError("n_steps must be >= 0")
                    rt.session.n_steps = body.n_steps
                if body.safe_mode is not None:
                    rt.session.domain.safe_mode = body.safe_mode
            except (ValueError, KeyError, TypeError) as exc:
                raise HTTPException(400, detail=str(exc))
            rt.refresh_grid()
            return {
                "schema_version": SCHEMA_VERSION,
                "emitter": rt.session.emitter.config.name,
                "n_steps": rt.session.n_steps,
                "safe_mode": rt.session.domain.safe_mode,
            }
        finally:
            rt.lock.release()

    @app.post("/sessions/{session_id}/reinitialise")
    def post_reinitialise(session_id: str):
        rt = runtime(session_id)
        if not rt.lock.acquire(blocking=False):
            raise HTTPException(409, detail="a step is already in flight")
        try:
            try:
                rt.session.reinitialise()
            except SessionError as exc:
                raise HTTPException(400, detail=str(exc))
            rt.refresh_grid()
            return {"schema_version": SCHEMA_VERSION, "grid": rt.grid_cache}
        finally:
            rt.lock.release()

    return app


_env_config = os.environ.get("VOXELITES_CONFIG")
app = create_app(EngineConfig.from_file(_env_config) if _env_config else None)


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Serve the interactive engine")
    parser.add_argument("--host", default=os.environ.get("VOXELITES_HOST", "127.0.0.1"))
    parser.add_argument(
        "--port", type=int, default=int(os.environ.get("VOXELITES_PORT", "8000"))
    )
    parser.add_argument("--config", default=None, help="engine config JSON path")
    args = parser.parse_args(argv)
    config = EngineConfig.from_file(args.config) if args.config else None
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    main()
