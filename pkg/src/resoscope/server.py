"""HTTP JSON service exposing the exploration pipeline.

All endpoints are read-only GETs over a single graph loaded at startup.
Responses are rendered through the same canonical serializer as the CLI,
so both interfaces emit byte-identical JSON for identical parameters.
Suggestion computation over a full grid is asynchronous: the first
request schedules a job and clients poll /api/status until it completes.
"""

from __future__ import annotations

import uuid
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import HTMLResponse
from pydantic import BaseModel

from . import serialize
from .engine import Explorer
from .graph import ParameterError, ParseError


class JobStatus(BaseModel):
    job: str
    state: str
    progress: float
    error: Optional[str] = None


class SuggestPending(BaseModel):
    status: str
    job: str


def _json(payload) -> Response:
    return Response(content=serialize.canonical_json(payload), media_type="application/json")


def create_app(explorer: Explorer, frontend_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="resoscope", version="0.1.0")
    app.state.explorer = explorer

    @app.exception_handler(ParameterError)
    async def _param_err(_req: Request, exc: ParameterError):
        return Response(
            content=serialize.canonical_json({"error": str(exc)}),
            media_type="application/json",
            status_code=400,
        )

    @app.exception_handler(ParseError)
    async def _parse_err(_req: Request, exc: ParseError):
        return Response(
            content=serialize.canonical_json({"error": str(exc)}),
            media_type="application/json",
            status_code=400,
        )

    @app.exception_handler(Exception)
    async def _internal_err(_req: Request, exc: Exception):
        token = uuid.uuid4().hex[:12]
        return Response(
            content=serialize.canonical_json({"error": "internal error", "id": token}),
            media_type="application/json",
            status_code=500,
        )

    @app.get("/api/meta")
    def meta():
        return _json(serialize.meta_dict(explorer.graph, explorer.name))

    @app.get("/api/suggest")
    def suggest(
        method: str = Query("sliding"),
        metric: str = Query("bottleneck"),
        max_r: Optional[int] = Query(None),
        m: int = Query(5),
        order: float = Query(1.0),
        wait: bool = Query(False),
    ):
        curve = explorer.curve_if_ready(method, metric, max_r, m, order)
        if curve is None:
            if wait:
                curve = explorer.suggest(method, metric, max_r, m, order)
            else:
                job = explorer.submit_suggest(method, metric, max_r, m, order)
                if job.state != "done":
                    return _json({"status": job.state, "job": job.id})
                curve = explorer.curve_if_ready(method, metric, max_r, m, order)
        return _json(serialize.suggestions_dict(curve))

    @app.get("/api/curve")
    def curve(
        method: str = Query("sliding"),
        metric: str = Query("bottleneck"),
        max_r: Optional[int] = Query(None),
        m: int = Query(5),
        order: float = Query(1.0),
        wait: bool = Query(False),
    ):
        ready = explorer.curve_if_ready(method, metric, max_r, m, order)
        if ready is None:
            if wait:
                ready = explorer.suggest(method, metric, max_r, m, order)
            else:
                job = explorer.submit_suggest(method, metric, max_r, m, order)
                if job.state != "done":
                    return _json({"status": job.state, "job": job.id})
                ready = explorer.curve_if_ready(method, metric, max_r, m, order)
        return _json(serialize.curve_dict(ready))

    @app.get("/api/status")
    def status(job: str = Query(...)):
        state = explorer.job(job)
        if state is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return _json(
            JobStatus(
                job=state.id, state=state.state, progress=state.progress, error=state.error
            ).model_dump(exclude_none=True)
        )

    @app.get("/api/barcode")
    def barcode(
        r: int = Query(...),
        method: str = Query("sliding"),
        members: bool = Query(False),
    ):
        result = explorer.barcode(method, r, "colored")
        return _json(serialize.barcode_dict(result, include_members=members))

    @app.get("/api/layout")
    def layout(
        r: int = Query(...),
        method: str = Query("sliding"),
        ordering: str = Query("bottom"),
        min_nodes: int = Query(0),
        min_duration: int = Query(0),
    ):
        spec = explorer.layout(method, r, ordering, min_nodes, min_duration)
        return _json(serialize.layout_dict(spec))

    @app.get("/api/flows")
    def flows(
        r: int = Query(...),
        mode: str = Query(...),
        key: str = Query(...),
        method: str = Query("sliding"),
    ):
        value = key.split(",") if mode == "label" else key
        flow_set = explorer.flows(method, r, mode, value)
        return _json(serialize.flows_dict(flow_set))

    @app.get("/api/snapshot")
    def snapshot(
        r: int = Query(...),
        t: float = Query(...),
        method: str = Query("sliding"),
    ):
        snap = explorer.snapshot(method, r, t)
        return _json(serialize.snapshot_dict(snap))

    @app.get("/api/explain")
    def explain(
        r1: int = Query(...),
        r2: int = Query(...),
        method: str = Query("sliding"),
    ):
        exp = explorer.explain(method, min(r1, r2), max(r1, r2))
        return _json(serialize.explanation_dict(exp, explorer.graph.node_names))

    @app.get("/api/features")
    def features(
        rs: str = Query(...),
        method: str = Query("sliding"),
        mds: bool = Query(False),
    ):
        try:
            resolutions = sorted({int(x) for x in rs.split(",") if x.strip()})
        except ValueError as exc:
            raise ParameterError(f"bad resolution list: {exc}")
        if not resolutions:
            raise ParameterError("empty resolution list")
        gf = explorer.global_features(method, resolutions, with_mds=mds)
        payload = serialize.global_features_dict(gf)
        if len(resolutions) >= 2:
            fc = explorer.feature_curves(method, resolutions)
            payload["mean_features"] = serialize.feature_curves_dict(fc)
        return _json(payload)

    if frontend_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return "<html><body><h1>resoscope</h1><p>JSON API under /api/.</p></body></html>"

    return app
