"""Turning per-annotator verdicts into a per-task outcome.

The rater counts (5 and 3) come from the protocol; how the verdicts combine
is repo policy: Both/Neither map to Tie first, then a plurality vote over
{A, B, Tie} with plurality ties resolved as Tie. Reports keep the raw vote
counts so a different rule can be recomputed from the same log.
"""

from __future__ import annotations

from collections import Counter

from .tasks import VERDICTS, ComparisonTask, PreferenceJudgment

OUTCOMES = ("x_wins", "y_wins", "tie")


def normalize_verdict(verdict: str, metric: str) -> str:
    """Collapse the metric-specific vocabulary to {A, B, Tie}."""
    if verdict not in VERDICTS[metric]:
        raise ValueError(f"verdict {verdict!r} not allowed for metric {metric!r}")
    return "Tie" if verdict in ("Both", "Neither", "Tie") else verdict


def count_votes(
    task: ComparisonTask, judgments: list[PreferenceJudgment]
) -> dict[str, int]:
    """Model-space vote counts {x, y, tie} after normalization."""
    votes = {"x": 0, "y": 0, "tie": 0}
    for judgment in judgments:
        side = normalize_verdict(judgment.verdict, task.metric)
        votes["tie" if side == "Tie" else task.assignment[side]] += 1
    return votes


def aggregate_task(
    task: ComparisonTask, judgments: list[PreferenceJudgment]
) -> str:
    """Plurality outcome in model space: "x_wins", "y_wins", or "tie"."""
    if len(judgments) != task.required_judgments:
        raise ValueError(
            f"task {task.task_id} needs exactly {task.required_judgments} "
            f"judgments, got {len(judgments)}"
        )
    for judgment in judgments:
        if judgment.task_id != task.task_id:
            raise ValueError(
                f"judgment for {judgment.task_id!r} mixed into task {task.task_id!r}"
            )
    annotators = Counter(j.annotator_id for j in judgments)
    repeat = [a for a, c in annotators.items() if c > 1]
    if repeat:
        raise ValueError(f"multiple judgments from annotator {repeat[0]!r}")

    votes = count_votes(task, judgments)
    best = max(votes.values())
    leaders = [k for k, v in votes.items() if v == best]
    if len(leaders) > 1 or leaders[0] == "tie":
        return "tie"
    return f"{leaders[0]}_wins"
