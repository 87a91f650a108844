"""HTTP API for the two human-filtering stages.

Single-writer semantics: every store mutation and claim operation happens
under one lock, so concurrent annotators are serialized and each record under
review is claimed by exactly one annotator until verdict or timeout.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import FileResponse

from .records import ChecklistVerdict, CurationStage, StateError
from .store import CurationStore

DEFAULT_CLAIM_TTL = 600.0


class ClaimTable:
    """record_id -> (annotator, expiry); expired claims are reclaimable."""

    def __init__(self, ttl: float = DEFAULT_CLAIM_TTL):
        self.ttl = ttl
        self._claims: dict[str, tuple[str, float]] = {}

    def holder(self, record_id: str, now: float) -> str | None:
        entry = self._claims.get(record_id)
        if entry is None or entry[1] <= now:
            return None
        return entry[0]

    def claim(self, record_id: str, annotator: str, now: float) -> None:
        self._claims[record_id] = (annotator, now + self.ttl)

    def release(self, record_id: str) -> None:
        self._claims.pop(record_id, None)


def create_app(
    store: CurationStore,
    claim_ttl: float = DEFAULT_CLAIM_TTL,
    clock=time.time,
) -> FastAPI:
    """Build the annotation FastAPI app around one store instance."""
    app = FastAPI(title="curation funnel")
    lock = threading.Lock()
    claims = ClaimTable(claim_ttl)
    stage_for = {1: CurationStage.AUTO_PASSED, 2: CurationStage.STAGE1_KEPT}

    def _task_payload(record, stage: int) -> dict:
        return {
            "record_id": record.id,
            "stage": stage,
            "uri": record.uri,
            "image_url": f"/images/{record.id}",
            "caption": record.caption,
            "concept": record.concept,
            "width": record.width,
            "height": record.height,
            "curated_caption": record.curated_caption,
        }

    @app.get("/tasks/next")
    def next_task(
        stage: int = Query(..., ge=1, le=2),
        annotator: str = Query(..., min_length=1),
    ):
        now = clock()
        with lock:
            for record in store.by_stage(stage_for[stage]):
                holder = claims.holder(record.id, now)
                if holder is None or holder == annotator:
                    claims.claim(record.id, annotator, now)
                    return {"task": _task_payload(record, stage)}
        return {"task": None}

    @app.post("/tasks/{record_id}/verdict")
    def submit_verdict(record_id: str, body: dict = Body(...)):
        stage = body.get("stage")
        annotator = str(body.get("annotator", ""))
        if stage not in (1, 2):
            raise HTTPException(status_code=422, detail="stage must be 1 or 2")
        if not annotator:
            raise HTTPException(status_code=422, detail="annotator is required")

        now = clock()
        with lock:
            record = store.records.get(record_id)
            if record is None:
                raise HTTPException(status_code=404, detail="unknown record")
            holder = claims.holder(record_id, now)
            if holder is not None and holder != annotator:
                raise HTTPException(
                    status_code=409,
                    detail="record claimed by another annotator",
                )
            try:
                if stage == 1:
                    verdict = body.get("verdict")
                    if verdict not in ("keep", "reject"):
                        raise HTTPException(
                            status_code=422, detail="verdict must be keep or reject"
                        )
                    store.stage1_review(record_id, verdict, annotator, ts=now)
                else:
                    try:
                        checklist = ChecklistVerdict.from_dict(
                            {
                                **body.get("checklist", {}),
                                "annotator_id": annotator,
                                "timestamp": now,
                            }
                        )
                    except ValueError as exc:
                        raise HTTPException(status_code=422, detail=str(exc))
                    store.stage2_review(record_id, checklist, ts=now)
                    caption = str(body.get("curated_caption", "")).strip()
                    if caption and record.stage is CurationStage.SELECTED:
                        store.set_curated_caption(
                            record_id, caption, annotator, ts=now
                        )
            except StateError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            claims.release(record_id)
            return {
                "record_id": record_id,
                "stage": record.stage.value,
                "curated_caption": record.curated_caption,
            }

    @app.get("/funnel/stats")
    def funnel_stats():
        with lock:
            return store.funnel_stats()

    @app.get("/images/{record_id}")
    def image(record_id: str):
        with lock:
            record = store.records.get(record_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown record")
        path = Path(record.uri)
        if not path.is_file():
            raise HTTPException(status_code=404, detail="image file not found")
        return FileResponse(path)

    return app
