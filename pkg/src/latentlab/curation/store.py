"""Event-sourced curation state.

All state changes flow through `apply_event`, which is the single source of
truth for the stage machine, budget caps and rejection attribution.  Replay
is idempotent: events whose transition is no longer applicable are skipped,
so applying a log twice equals applying it once.  Malformed event payloads,
by contrast, raise — silent data corruption is worse than a loud replay.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import IO, Iterable

from .filters import apply_predicate_filters, balance_concepts, rank_by_engagement, rejection_reason
from .records import (
    CascadeConfig,
    ChecklistVerdict,
    CurationStage,
    ImageRecord,
    StateError,
)

_EVENT_OPS = ("ingest", "auto_pass", "auto_reject", "stage1", "stage2", "caption")


class ExportBlockedError(RuntimeError):
    """Export refused; `missing` lists SELECTED ids without curated captions."""

    def __init__(self, missing: list[str]):
        super().__init__(
            f"{len(missing)} selected record(s) lack curated captions: "
            + ", ".join(missing[:10])
            + ("…" if len(missing) > 10 else "")
        )
        self.missing = missing


class CurationStore:
    """In-memory funnel state driven by an append-only event log."""

    def __init__(self, config: CascadeConfig):
        self.config = config
        self.records: dict[str, ImageRecord] = {}
        self.ingest_order: list[str] = []
        self.events: list[dict] = []
        self.auto_reject_reasons: dict[str, str] = {}
        self.stage1_reasons: dict[str, str] = {}
        self.stage2_reasons: dict[str, str] = {}
        self._stage1_kept_total = 0
        self._selected_total = 0
        self._log_fh: IO[str] | None = None

    # ------------------------------------------------------------------ log

    def attach_log(self, path: str | Path) -> None:
        """Append subsequent events to `path` (flushed per event)."""
        self._log_fh = open(path, "a", encoding="utf-8")

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    def _emit(self, event: dict) -> bool:
        applied = self.apply_event(event)
        if applied:
            self.events.append(event)
            if self._log_fh is not None:
                self._log_fh.write(json.dumps(event, sort_keys=True) + "\n")
                self._log_fh.flush()
        return applied

    # ---------------------------------------------------------------- state

    def apply_event(self, event: dict) -> bool:
        """Apply one event; returns False when the transition is not applicable.

        Raises ValueError on structurally malformed events (unknown op,
        missing payload pieces) — a broken log should fail loudly.
        """
        op = event.get("op")
        if op not in _EVENT_OPS:
            raise ValueError(f"unknown event op: {op!r}")
        record_id = event.get("record_id")
        payload = event.get("payload", {})

        if op == "ingest":
            if record_id in self.records:
                return False
            record = ImageRecord.from_dict(payload)
            record.stage = CurationStage.POOL
            self.records[record.id] = record
            self.ingest_order.append(record.id)
            return True

        record = self.records.get(record_id)
        if record is None:
            raise ValueError(f"event references unknown record {record_id!r}")

        if op == "auto_pass":
            if record.stage is not CurationStage.POOL:
                return False
            record.transition(CurationStage.AUTO_PASSED)
            return True

        if op == "auto_reject":
            if record.stage is not CurationStage.POOL:
                return False
            if record_id in self.auto_reject_reasons:
                return False
            self.auto_reject_reasons[record_id] = str(payload.get("reason", ""))
            return True

        if op == "stage1":
            verdict = payload.get("verdict")
            if verdict not in ("keep", "reject"):
                raise ValueError(f"stage1 verdict must be keep/reject, got {verdict!r}")
            if record.stage is not CurationStage.AUTO_PASSED:
                return False
            if verdict == "reject":
                record.transition(CurationStage.STAGE1_REJECTED)
                self.stage1_reasons[record_id] = "annotator"
            elif self._stage1_kept_total >= self.config.budget_stage1:
                record.transition(CurationStage.STAGE1_REJECTED)
                self.stage1_reasons[record_id] = "budget"
            else:
                record.transition(CurationStage.STAGE1_KEPT)
                self._stage1_kept_total += 1
            return True

        if op == "stage2":
            checklist = ChecklistVerdict.from_dict(payload.get("checklist", {}))
            if record.stage is not CurationStage.STAGE1_KEPT:
                return False
            if not checklist.all_pass():
                record.transition(CurationStage.STAGE2_REJECTED)
                self.stage2_reasons[record_id] = checklist.first_failing()
            elif self._selected_total >= self.config.budget_final:
                record.transition(CurationStage.STAGE2_REJECTED)
                self.stage2_reasons[record_id] = "budget"
            else:
                record.transition(CurationStage.SELECTED)
                self._selected_total += 1
            return True

        if op == "caption":
            text = str(payload.get("curated_caption", ""))
            if not text:
                raise ValueError("caption event with empty curated_caption")
            if record.stage in (
                CurationStage.STAGE1_REJECTED,
                CurationStage.STAGE2_REJECTED,
            ):
                return False
            record.curated_caption = text
            return True

        raise AssertionError("unreachable")

    # ----------------------------------------------------------- operations

    def ingest(self, records: Iterable[ImageRecord], ts: float | None = None) -> int:
        ts = time.time() if ts is None else ts
        added = 0
        for record in records:
            added += self._emit(
                {
                    "record_id": record.id,
                    "op": "ingest",
                    "payload": record.to_dict(),
                    "annotator_id": "",
                    "ts": ts,
                }
            )
        return added

    def run_auto_cascade(self, ts: float | None = None) -> dict:
        """Predicate filters + concept balancing/ranking under budget_auto.

        Pool records that pass everything move to AUTO_PASSED; the rest stay
        in POOL with a recorded reason (first failing filter, or "budget" for
        records squeezed out by the cap/quotas).
        """
        ts = time.time() if ts is None else ts
        pool = [
            self.records[rid]
            for rid in self.ingest_order
            if self.records[rid].stage is CurationStage.POOL
            and rid not in self.auto_reject_reasons
        ]
        survivors, rejections = apply_predicate_filters(pool, self.config)
        if self.config.concept_quotas:
            chosen = balance_concepts(
                survivors,
                self.config.concept_quotas,
                self.config.budget_auto,
                self.config.seed,
            )
        else:
            chosen = rank_by_engagement(survivors, self.config.budget_auto)
        chosen_ids = {r.id for r in chosen}

        for record in pool:
            if record.id in chosen_ids:
                self._emit(
                    {
                        "record_id": record.id,
                        "op": "auto_pass",
                        "payload": {},
                        "annotator_id": "",
                        "ts": ts,
                    }
                )
            else:
                reason = rejection_reason(record, self.config) or "budget"
                self._emit(
                    {
                        "record_id": record.id,
                        "op": "auto_reject",
                        "payload": {"reason": reason},
                        "annotator_id": "",
                        "ts": ts,
                    }
                )
        return {
            "evaluated": len(pool),
            "auto_passed": len(chosen_ids),
            "rejections": rejections,
        }

    def stage1_review(
        self,
        record_id: str,
        verdict: str,
        annotator_id: str,
        ts: float | None = None,
    ) -> ImageRecord:
        record = self._require(record_id)
        if record.stage is not CurationStage.AUTO_PASSED:
            raise StateError(
                f"record {record_id} is in {record.stage.value}, not AUTO_PASSED"
            )
        if verdict not in ("keep", "reject"):
            raise ValueError(f"verdict must be keep/reject, got {verdict!r}")
        self._emit(
            {
                "record_id": record_id,
                "op": "stage1",
                "payload": {"verdict": verdict},
                "annotator_id": annotator_id,
                "ts": time.time() if ts is None else ts,
            }
        )
        return record

    def stage2_review(
        self, record_id: str, checklist: ChecklistVerdict, ts: float | None = None
    ) -> ImageRecord:
        record = self._require(record_id)
        if record.stage is not CurationStage.STAGE1_KEPT:
            raise StateError(
                f"record {record_id} is in {record.stage.value}, not STAGE1_KEPT"
            )
        self._emit(
            {
                "record_id": record_id,
                "op": "stage2",
                "payload": {"checklist": checklist.to_dict()},
                "annotator_id": checklist.annotator_id,
                "ts": time.time() if ts is None else ts,
            }
        )
        return record

    def set_curated_caption(
        self,
        record_id: str,
        caption: str,
        annotator_id: str = "",
        ts: float | None = None,
    ) -> ImageRecord:
        record = self._require(record_id)
        applied = self._emit(
            {
                "record_id": record_id,
                "op": "caption",
                "payload": {"curated_caption": caption},
                "annotator_id": annotator_id,
                "ts": time.time() if ts is None else ts,
            }
        )
        if not applied:
            raise StateError(
                f"record {record_id} is in {record.stage.value}; caption refused"
            )
        return record

    def _require(self, record_id: str) -> ImageRecord:
        record = self.records.get(record_id)
        if record is None:
            raise KeyError(f"unknown record {record_id!r}")
        return record

    # -------------------------------------------------------------- queries

    def by_stage(self, stage: CurationStage) -> list[ImageRecord]:
        """Records currently in `stage`, in ingest order."""
        return [
            self.records[rid]
            for rid in self.ingest_order
            if self.records[rid].stage is stage
        ]

    def funnel_stats(self) -> dict:
        counts = {stage.value: 0 for stage in CurationStage}
        for record in self.records.values():
            counts[record.stage.value] += 1
        ever_stage1_kept = (
            counts["STAGE1_KEPT"] + counts["SELECTED"] + counts["STAGE2_REJECTED"]
        )
        reason_counts: dict[str, int] = {}
        for reason in self.auto_reject_reasons.values():
            reason_counts[reason] = reason_counts.get(reason, 0) + 1
        stage1_counts: dict[str, int] = {}
        for reason in self.stage1_reasons.values():
            stage1_counts[reason] = stage1_counts.get(reason, 0) + 1
        stage2_counts: dict[str, int] = {}
        for reason in self.stage2_reasons.values():
            stage2_counts[reason] = stage2_counts.get(reason, 0) + 1
        return {
            "counts": counts,
            "cumulative": {
                "pool": len(self.records),
                "auto_passed": len(self.records) - counts["POOL"],
                "stage1_kept": ever_stage1_kept,
                "selected": counts["SELECTED"],
            },
            "rejections": {
                "auto": reason_counts,
                "stage1": stage1_counts,
                "stage2": stage2_counts,
            },
            "budgets": {
                "auto": self.config.budget_auto,
                "stage1": self.config.budget_stage1,
                "final": self.config.budget_final,
            },
            "pending": {
                "stage1": counts["AUTO_PASSED"],
                "stage2": counts["STAGE1_KEPT"],
            },
        }

    # ------------------------------------------------------------ persistence

    def save_events(self, path: str | Path) -> Path:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as fh:
            for event in self.events:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
        return path

    @classmethod
    def replay(
        cls, events: Iterable[dict] | str | Path, config: CascadeConfig
    ) -> "CurationStore":
        """Rebuild state from an event log (path or iterable of events)."""
        if isinstance(events, (str, Path)):
            lines = Path(events).read_text(encoding="utf-8").splitlines()
            events = [json.loads(line) for line in lines if line.strip()]
        store = cls(config)
        for event in events:
            if store.apply_event(event):
                store.events.append(event)
        return store

    def export_quality_set(self, path: str | Path) -> Path:
        """Write the SELECTED manifest (curated captions), ordered by id.

        The manifest is the fine-tuning input format: one JSON object per
        line with id/uri/caption/concept/width/height, where caption is the
        human-curated one.
        """
        selected = sorted(
            (r for r in self.records.values() if r.stage is CurationStage.SELECTED),
            key=lambda r: r.id,
        )
        missing = [r.id for r in selected if not r.curated_caption]
        if missing:
            raise ExportBlockedError(missing)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            for r in selected:
                row = {
                    "id": r.id,
                    "uri": r.uri,
                    "caption": r.curated_caption,
                    "concept": r.concept,
                    "width": r.width,
                    "height": r.height,
                }
                fh.write(json.dumps(row, sort_keys=True) + "\n")
        return path
