"""HTTP+JSON API over the review store.

Endpoints (all JSON unless noted):

    GET  /api/tasks/next?reviewer=<name>   claim the oldest pending task
    POST /api/tasks/{id}/submit            {action, reviewer, text?, reason?}
    POST /api/tasks/{id}/release
    GET  /api/progress
    GET  /api/images/{sample_id}           the sample image (binary)
    POST /api/export                       {partial?: bool} -> exported manifest

All mutations are serialized through one lock over the event log, so
concurrent claims are linearizable. An optional shared token (X-Review-Token
header) gates every /api route. When a built frontend directory is given,
its static files are served at /.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import (EmptyBenchError, EmptyCorrection, IllegalTransition,
                      IncompleteProject, NotClaimedByYou)
from .store import ReviewStore


def create_app(store: ReviewStore, token: str | None = None,
               image_root: str | Path = ".",
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ocrforge review service")
    lock = threading.Lock()
    image_root = Path(image_root)

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if token and request.url.path.startswith("/api"):
            if request.headers.get("x-review-token") != token:
                return JSONResponse({"error": "bad token"}, status_code=401)
        return await call_next(request)

    @app.get("/api/tasks/next")
    def next_task(reviewer: str):
        with lock:
            task = store.claim_next(reviewer)
        if task is None:
            return {"task": None, "progress": store.progress()}
        return {"task": task.to_dict(), "progress": store.progress()}

    @app.post("/api/tasks/{task_id}/submit")
    def submit(task_id: str, body: dict):
        try:
            with lock:
                task = store.submit(
                    task_id,
                    action=body.get("action", ""),
                    reviewer=body.get("reviewer", ""),
                    text=body.get("text"),
                    reason=body.get("reason"),
                )
        except NotClaimedByYou as e:
            raise HTTPException(409, f"NotClaimedByYou: {e}")
        except IllegalTransition as e:
            raise HTTPException(409, f"IllegalTransition: {e}")
        except EmptyCorrection as e:
            raise HTTPException(422, f"EmptyCorrection: {e}")
        except (KeyError, ValueError) as e:
            raise HTTPException(404 if isinstance(e, KeyError) else 422, str(e))
        return {"task": task.to_dict()}

    @app.post("/api/tasks/{task_id}/release")
    def release(task_id: str):
        try:
            with lock:
                task = store.release(task_id)
        except KeyError as e:
            raise HTTPException(404, str(e))
        except IllegalTransition as e:
            raise HTTPException(409, f"IllegalTransition: {e}")
        return {"task": task.to_dict()}

    @app.get("/api/progress")
    def progress():
        return store.progress()

    @app.get("/api/images/{sample_id}")
    def image(sample_id: str):
        for task in store.tasks.values():
            if task.sample_id == sample_id:
                path = Path(task.image_path)
                if not path.is_absolute():
                    path = image_root / path
                if not path.exists():
                    raise HTTPException(404, "image file missing")
                return FileResponse(path)
        raise HTTPException(404, "unknown sample")

    @app.post("/api/export")
    def export(body: dict | None = None):
        body = body or {}
        try:
            with lock:
                manifest = store.export_benchmark(
                    partial=bool(body.get("partial")))
        except IncompleteProject as e:
            raise HTTPException(409, f"IncompleteProject: {e}")
        except EmptyBenchError as e:
            raise HTTPException(409, f"EmptyBenchError: {e}")
        out_dir = store.project_dir / "export"
        manifest.save(out_dir)
        return {"exported_to": str(out_dir), "stats": manifest.stats}

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="frontend")
    return app
