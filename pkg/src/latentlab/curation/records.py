"""Record types and configuration for the curation funnel."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class CurationStage(str, Enum):
    """Funnel states: POOL -> AUTO_PASSED -> STAGE1_* -> SELECTED/STAGE2_REJECTED."""

    POOL = "POOL"
    AUTO_PASSED = "AUTO_PASSED"
    STAGE1_KEPT = "STAGE1_KEPT"
    STAGE1_REJECTED = "STAGE1_REJECTED"
    SELECTED = "SELECTED"
    STAGE2_REJECTED = "STAGE2_REJECTED"


# Legal stage transitions; anything else is a state error.  Terminal states
# (rejections and SELECTED) have no outgoing edges.
ALLOWED_TRANSITIONS: dict[CurationStage, tuple[CurationStage, ...]] = {
    CurationStage.POOL: (CurationStage.AUTO_PASSED,),
    CurationStage.AUTO_PASSED: (
        CurationStage.STAGE1_KEPT,
        CurationStage.STAGE1_REJECTED,
    ),
    CurationStage.STAGE1_KEPT: (
        CurationStage.SELECTED,
        CurationStage.STAGE2_REJECTED,
    ),
    CurationStage.STAGE1_REJECTED: (),
    CurationStage.SELECTED: (),
    CurationStage.STAGE2_REJECTED: (),
}


class StateError(RuntimeError):
    """Raised on an illegal stage transition or wrong-stage operation."""


@dataclass
class ImageRecord:
    """One candidate image flowing through the funnel.

    The constructor is intentionally permissive so malformed rows can still be
    carried (and rejected with reason "malformed"); use `problems()` to check
    well-formedness.
    """

    id: str
    uri: str = ""
    width: int = 0
    height: int = 0
    caption: str = ""
    aesthetic_score: float = 0.0
    clip_score: float = 0.0
    ocr_word_count: int = 0
    engagement: float = 0.0
    concept: str = "other"
    stage: CurationStage = CurationStage.POOL
    curated_caption: str = ""

    def __post_init__(self) -> None:
        if isinstance(self.stage, str):
            self.stage = CurationStage(self.stage)
        if not self.concept:
            self.concept = "other"

    def problems(self) -> list[str]:
        """Well-formedness issues, empty when the record is valid."""
        issues = []
        if not self.id:
            issues.append("empty id")
        if self.width < 1 or self.height < 1:
            issues.append("non-positive dimensions")
        for name in ("aesthetic_score", "clip_score", "engagement"):
            if not math.isfinite(getattr(self, name)):
                issues.append(f"non-finite {name}")
        if math.isfinite(self.aesthetic_score) and not 0.0 <= self.aesthetic_score <= 1.0:
            issues.append("aesthetic_score outside [0, 1]")
        if self.ocr_word_count < 0:
            issues.append("negative ocr_word_count")
        if math.isfinite(self.engagement) and self.engagement < 0:
            issues.append("negative engagement")
        return issues

    def transition(self, new_stage: CurationStage) -> None:
        if new_stage not in ALLOWED_TRANSITIONS[self.stage]:
            raise StateError(
                f"record {self.id}: illegal transition {self.stage.value} -> "
                f"{new_stage.value}"
            )
        self.stage = new_stage

    @property
    def aspect_ratio(self) -> float:
        return self.width / self.height if self.height else math.nan

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "uri": self.uri,
            "width": self.width,
            "height": self.height,
            "caption": self.caption,
            "aesthetic_score": self.aesthetic_score,
            "clip_score": self.clip_score,
            "ocr_word_count": self.ocr_word_count,
            "engagement": self.engagement,
            "concept": self.concept,
            "stage": self.stage.value,
            "curated_caption": self.curated_caption,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ImageRecord":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


# Checklist items in review order; rejection reasons use the first failure.
CHECKLIST_ITEMS = (
    "composition",
    "lighting",
    "color_contrast",
    "subject_background",
    "subjective_q1",
    "subjective_q2",
    "subjective_q3",
)


@dataclass
class ChecklistVerdict:
    """Stage-2 review: seven pass/fail answers, all required.

    The four principle items cover composition, lighting, color & contrast,
    and subject/background separation.  The three subjective items are: does
    the image tell a compelling story (q1); could it NOT have been captured
    better (q2 — an answer of "could be better" is a fail, so store the pass
    boolean); is it among the best the reviewer has seen (q3).
    """

    composition: bool
    lighting: bool
    color_contrast: bool
    subject_background: bool
    subjective_q1: bool
    subjective_q2: bool
    subjective_q3: bool
    annotator_id: str
    timestamp: float = 0.0

    def all_pass(self) -> bool:
        return all(getattr(self, item) for item in CHECKLIST_ITEMS)

    def first_failing(self) -> str | None:
        for item in CHECKLIST_ITEMS:
            if not getattr(self, item):
                return item
        return None

    def to_dict(self) -> dict:
        d = {item: getattr(self, item) for item in CHECKLIST_ITEMS}
        d["annotator_id"] = self.annotator_id
        d["timestamp"] = self.timestamp
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ChecklistVerdict":
        missing = [item for item in CHECKLIST_ITEMS if item not in d]
        if missing:
            raise ValueError(f"incomplete checklist, missing: {', '.join(missing)}")
        bad = [item for item in CHECKLIST_ITEMS if not isinstance(d[item], bool)]
        if bad:
            raise ValueError(f"checklist answers must be booleans: {', '.join(bad)}")
        return cls(
            **{item: d[item] for item in CHECKLIST_ITEMS},
            annotator_id=str(d.get("annotator_id", "")),
            timestamp=float(d.get("timestamp", 0.0)),
        )


@dataclass
class CascadeConfig:
    """Thresholds, quotas and budgets for the automatic cascade.

    All comparisons downstream are inclusive (>= / <=).  Budgets must be
    strictly decreasing: auto pool > stage-1 keeps > final selection.
    """

    aesthetic_min: float = 0.5
    clip_min: float = 0.25
    ocr_max_words: int = 10
    min_side_px: int = 512
    aspect_ratio_min: float = 0.5
    aspect_ratio_max: float = 2.0
    concept_quotas: dict[str, float] = field(default_factory=dict)
    budget_auto: int = 200_000
    budget_stage1: int = 20_000
    budget_final: int = 2_000
    seed: int = 0
    content_filter_enabled: bool = False

    def __post_init__(self) -> None:
        for name in ("aesthetic_min", "clip_min", "aspect_ratio_min", "aspect_ratio_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.aspect_ratio_min > self.aspect_ratio_max:
            raise ValueError("aspect_ratio_min must not exceed aspect_ratio_max")
        if not self.budget_auto > self.budget_stage1 > self.budget_final > 0:
            raise ValueError(
                "budgets must be strictly decreasing: "
                f"{self.budget_auto} > {self.budget_stage1} > {self.budget_final}"
            )
        for concept, quota in self.concept_quotas.items():
            if not 0.0 < quota <= 1.0:
                raise ValueError(f"quota for {concept!r} must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "aesthetic_min": self.aesthetic_min,
            "clip_min": self.clip_min,
            "ocr_max_words": self.ocr_max_words,
            "min_side_px": self.min_side_px,
            "aspect_ratio_min": self.aspect_ratio_min,
            "aspect_ratio_max": self.aspect_ratio_max,
            "concept_quotas": dict(self.concept_quotas),
            "budget_auto": self.budget_auto,
            "budget_stage1": self.budget_stage1,
            "budget_final": self.budget_final,
            "seed": self.seed,
            "content_filter_enabled": self.content_filter_enabled,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CascadeConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})
