"""Paired human-preference evaluation: prompts, A/B tasks, win/tie/lose."""

from .aggregate import OUTCOMES, aggregate_task, count_votes, normalize_verdict
from .api import serve_eval_api
from .prompts import (
    CONCEPT_TAXONOMY,
    DEFAULT_CONCEPT_HISTOGRAM,
    PromptRecord,
    generate_prompt_set,
    load_prompts,
    validate_prompt_distribution,
    write_prompts,
)
from .report import compute_report, render_report
from .store import EvalState, JudgmentConflict, load_tasks
from .tasks import (
    METRICS,
    REQUIRED_JUDGMENTS,
    VERDICTS,
    ComparisonTask,
    PreferenceJudgment,
    build_task_set,
)

__all__ = [
    "OUTCOMES",
    "aggregate_task",
    "count_votes",
    "normalize_verdict",
    "serve_eval_api",
    "CONCEPT_TAXONOMY",
    "DEFAULT_CONCEPT_HISTOGRAM",
    "PromptRecord",
    "generate_prompt_set",
    "load_prompts",
    "validate_prompt_distribution",
    "write_prompts",
    "compute_report",
    "render_report",
    "EvalState",
    "JudgmentConflict",
    "load_tasks",
    "METRICS",
    "REQUIRED_JUDGMENTS",
    "VERDICTS",
    "ComparisonTask",
    "PreferenceJudgment",
    "build_task_set",
]
