"""Side-by-side comparison tasks with hidden, per-task model assignment."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .prompts import PromptRecord

METRICS = ("visual_appeal", "text_faithfulness")

# raters per task, per metric
REQUIRED_JUDGMENTS = {"visual_appeal": 5, "text_faithfulness": 3}

# verdict vocabulary an annotator may submit, per metric
VERDICTS = {
    "visual_appeal": ("A", "B", "Tie"),
    "text_faithfulness": ("A", "B", "Both", "Neither"),
}

SIDES = ("A", "B")


@dataclass
class ComparisonTask:
    """One prompt, two images, one metric.

    `assignment` maps side -> model ("x" or "y") and never leaves the server:
    `annotator_payload` is the only view annotators get, and it carries
    opaque per-side image URLs plus the caption only when the metric calls
    for it.
    """

    task_id: str
    prompt_id: str
    metric: str
    image_a_ref: str
    image_b_ref: str
    assignment: dict[str, str]
    caption: str = ""
    required_judgments: int = 0

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if sorted(self.assignment) != ["A", "B"] or set(
            self.assignment.values()
        ) != {"x", "y"}:
            raise ValueError("assignment must map sides A/B to models x/y")
        if self.required_judgments == 0:
            self.required_judgments = REQUIRED_JUDGMENTS[self.metric]

    def image_for_side(self, side: str) -> str:
        if side == "A":
            return self.image_a_ref
        if side == "B":
            return self.image_b_ref
        raise ValueError(f"unknown side {side!r}")

    def annotator_payload(self) -> dict:
        """What an annotator is allowed to see: no model identity anywhere."""
        payload = {
            "task_id": self.task_id,
            "metric": self.metric,
            "image_a_url": f"/eval/images/{self.task_id}/A",
            "image_b_url": f"/eval/images/{self.task_id}/B",
            "verdict_options": list(VERDICTS[self.metric]),
            "required_judgments": self.required_judgments,
        }
        if self.metric == "text_faithfulness":
            payload["caption"] = self.caption
        return payload

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "prompt_id": self.prompt_id,
            "metric": self.metric,
            "image_a_ref": self.image_a_ref,
            "image_b_ref": self.image_b_ref,
            "assignment": dict(self.assignment),
            "caption": self.caption,
            "required_judgments": self.required_judgments,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonTask":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass
class PreferenceJudgment:
    task_id: str
    annotator_id: str
    verdict: str
    ts: float = 0.0

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "annotator_id": self.annotator_id,
            "verdict": self.verdict,
            "ts": self.ts,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreferenceJudgment":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def build_task_set(
    prompts: list[PromptRecord],
    model_x_images: dict[str, str],
    model_y_images: dict[str, str],
    metric: str,
    seed: int,
) -> list[ComparisonTask]:
    """One task per prompt; which side shows which model is a seeded coin flip."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    rng = np.random.default_rng(seed)
    tasks = []
    for prompt in prompts:
        for name, images in (("x", model_x_images), ("y", model_y_images)):
            if prompt.id not in images:
                raise ValueError(f"missing model {name} image for prompt {prompt.id}")
        x_first = bool(rng.integers(2))
        assignment = {"A": "x", "B": "y"} if x_first else {"A": "y", "B": "x"}
        refs = {
            side: (model_x_images if model == "x" else model_y_images)[prompt.id]
            for side, model in assignment.items()
        }
        tasks.append(
            ComparisonTask(
                task_id=f"{metric}-{prompt.id}",
                prompt_id=prompt.id,
                metric=metric,
                image_a_ref=refs["A"],
                image_b_ref=refs["B"],
                assignment=assignment,
                caption=prompt.text,
            )
        )
    return tasks
