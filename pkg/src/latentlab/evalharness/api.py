"""HTTP API for blind A/B preference rating.

The annotator-facing payload routes images through opaque per-side URLs so
the hidden model assignment never crosses the wire.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import FileResponse

from .report import SLICES, compute_report
from .store import EvalState, JudgmentConflict
from .tasks import SIDES, PreferenceJudgment, ComparisonTask

DEFAULT_CLAIM_TTL = 600.0


def serve_eval_api(
    state: EvalState,
    claim_ttl: float = DEFAULT_CLAIM_TTL,
    clock=time.time,
) -> FastAPI:
    """Build the rating FastAPI app around one state instance."""
    app = FastAPI(title="preference eval")
    lock = threading.Lock()

    @app.get("/eval/tasks/next")
    def next_task(annotator: str = Query(..., min_length=1)):
        with lock:
            task = state.next_task(annotator, now=clock(), ttl=claim_ttl)
            if task is None:
                return {"task": None}
            return {"task": task.annotator_payload()}

    @app.post("/eval/tasks/{task_id}/judgment")
    def submit_judgment(task_id: str, body: dict = Body(...)):
        annotator = str(body.get("annotator_id", ""))
        verdict = body.get("verdict")
        if not annotator:
            raise HTTPException(status_code=422, detail="annotator_id is required")
        if task_id not in state.tasks:
            raise HTTPException(status_code=404, detail="unknown task")
        judgment = PreferenceJudgment(
            task_id=task_id, annotator_id=annotator,
            verdict=str(verdict), ts=clock(),
        )
        with lock:
            try:
                count = state.add_judgment(judgment)
            except JudgmentConflict as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
        return {
            "task_id": task_id,
            "recorded": True,
            "judgments": count,
            "complete": state.is_complete(task_id),
        }

    @app.get("/eval/report")
    def report(slice: str = Query("all")):
        if slice not in SLICES:
            raise HTTPException(status_code=422, detail="slice must be all or stylized")
        with lock:
            full = compute_report(state.tagged_outcomes())
        if slice == "all":
            return full
        rows = {k: v for k, v in full["rows"].items() if k.endswith("/stylized")}
        return {"rows": rows, "n_outcomes": full["n_outcomes"]}

    @app.get("/eval/images/{task_id}/{side}")
    def image(task_id: str, side: str):
        with lock:
            task: ComparisonTask | None = state.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail="unknown task")
        if side not in SIDES:
            raise HTTPException(status_code=404, detail="unknown side")
        path = Path(task.image_for_side(side))
        if not path.is_file():
            raise HTTPException(status_code=404, detail="image file not found")
        return FileResponse(path)

    return app
