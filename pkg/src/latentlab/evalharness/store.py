"""Eval session state: task registry, append-only judgment log, claims."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import IO, Iterable

from .aggregate import aggregate_task, count_votes, normalize_verdict
from .prompts import PromptRecord
from .tasks import ComparisonTask, PreferenceJudgment


class JudgmentConflict(RuntimeError):
    """Judgment rejected: duplicate annotator or already-complete task."""


class EvalState:
    """Holds tasks + prompts and folds the judgment log into reports.

    Judgments are append-only; the log is the source of truth and replaying
    it reproduces the state exactly.
    """

    def __init__(self, tasks: list[ComparisonTask], prompts: list[PromptRecord]):
        self.tasks: dict[str, ComparisonTask] = {}
        self.task_order: list[str] = []
        for task in tasks:
            if task.task_id in self.tasks:
                raise ValueError(f"duplicate task id {task.task_id}")
            self.tasks[task.task_id] = task
            self.task_order.append(task.task_id)
        self.prompts = {p.id: p for p in prompts}
        for task in tasks:
            if task.prompt_id not in self.prompts:
                raise ValueError(f"task {task.task_id} references unknown prompt")
        self.judgments: dict[str, list[PreferenceJudgment]] = {
            t: [] for t in self.task_order
        }
        self._seen: set[tuple[str, str]] = set()
        # task_id -> {annotator: claim expiry}
        self._claims: dict[str, dict[str, float]] = {}
        self._log_fh: IO[str] | None = None

    # -- log plumbing ------------------------------------------------------

    def attach_log(self, path: str | Path) -> None:
        self._log_fh = open(path, "a", encoding="utf-8")

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    # -- judgments ---------------------------------------------------------

    def add_judgment(self, judgment: PreferenceJudgment) -> int:
        """Validate + record one judgment; returns the task's judgment count."""
        task = self.tasks.get(judgment.task_id)
        if task is None:
            raise ValueError(f"unknown task {judgment.task_id!r}")
        normalize_verdict(judgment.verdict, task.metric)  # domain check
        key = (judgment.task_id, judgment.annotator_id)
        if key in self._seen:
            raise JudgmentConflict(
                f"annotator {judgment.annotator_id!r} already judged "
                f"{judgment.task_id}"
            )
        existing = self.judgments[judgment.task_id]
        if len(existing) >= task.required_judgments:
            raise JudgmentConflict(
                f"task {judgment.task_id} already has "
                f"{task.required_judgments} judgments"
            )
        existing.append(judgment)
        self._seen.add(key)
        self._claims.get(judgment.task_id, {}).pop(judgment.annotator_id, None)
        if self._log_fh is not None:
            self._log_fh.write(json.dumps(judgment.to_dict(), sort_keys=True) + "\n")
            self._log_fh.flush()
        return len(existing)

    def is_complete(self, task_id: str) -> bool:
        task = self.tasks[task_id]
        return len(self.judgments[task_id]) >= task.required_judgments

    # -- claims ------------------------------------------------------------

    def _active_claims(self, task_id: str, now: float) -> dict[str, float]:
        claims = self._claims.setdefault(task_id, {})
        for annotator, expiry in list(claims.items()):
            if expiry <= now:
                del claims[annotator]
        return claims

    def next_task(
        self, annotator: str, now: float | None = None, ttl: float = 600.0
    ) -> ComparisonTask | None:
        """First task this annotator can still judge; claims it atomically.

        A task accepts claims while (judgments + other live claims) leaves
        room under required_judgments; re-requesting returns the held claim.
        """
        now = time.time() if now is None else now
        for task_id in self.task_order:
            claims = self._active_claims(task_id, now)
            if annotator in claims and (task_id, annotator) not in self._seen:
                claims[annotator] = now + ttl
                return self.tasks[task_id]
        for task_id in self.task_order:
            if (task_id, annotator) in self._seen:
                continue
            task = self.tasks[task_id]
            claims = self._active_claims(task_id, now)
            room = task.required_judgments - len(self.judgments[task_id])
            if room - len(claims) >= 1:
                claims[annotator] = now + ttl
                return task
        return None

    # -- aggregation -------------------------------------------------------

    def tagged_outcomes(self) -> list[dict]:
        """Outcomes of all complete tasks, tagged for report slicing."""
        outcomes = []
        for task_id in self.task_order:
            task = self.tasks[task_id]
            judgments = self.judgments[task_id]
            if len(judgments) != task.required_judgments:
                continue  # pending tasks stay out of reports
            prompt = self.prompts[task.prompt_id]
            outcomes.append(
                {
                    "task_id": task_id,
                    "prompt_id": task.prompt_id,
                    "outcome": aggregate_task(task, judgments),
                    "votes": count_votes(task, judgments),
                    "source": prompt.source,
                    "metric": task.metric,
                    "stylized": prompt.stylized,
                }
            )
        return outcomes

    # -- persistence -------------------------------------------------------

    def save_tasks(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            for task_id in self.task_order:
                fh.write(
                    json.dumps(self.tasks[task_id].to_dict(), sort_keys=True) + "\n"
                )
        return path

    @classmethod
    def replay(
        cls,
        tasks: list[ComparisonTask],
        prompts: list[PromptRecord],
        log: str | Path | Iterable[str] | None = None,
    ) -> "EvalState":
        """Rebuild state by folding the judgment log; malformed lines raise."""
        state = cls(tasks, prompts)
        if log is None:
            return state
        if isinstance(log, (str, Path)):
            lines: Iterable[str] = Path(log).read_text().splitlines()
        else:
            lines = log
        for line in lines:
            line = line.strip()
            if not line:
                continue
            state.add_judgment(PreferenceJudgment.from_dict(json.loads(line)))
        return state


def load_tasks(path: str | Path) -> list[ComparisonTask]:
    tasks = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                tasks.append(ComparisonTask.from_dict(json.loads(line)))
    return tasks
