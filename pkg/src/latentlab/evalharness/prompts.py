"""Prompt-set management: taxonomy, manifests, and a stand-in generator.

The real open-user-input prompt corpus is proprietary, so the repo ships a
template generator that produces a set matching a target concept histogram.
The default histogram below is repo policy (a plausible mix of common
text-to-image concepts), not ground truth.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

PROMPT_SOURCES = ("parti-like", "open-user-input-like")

CONCEPT_TAXONOMY = (
    "people",
    "animals",
    "nature",
    "objects",
    "fantasy",
    "art",
    "food",
    "architecture",
    "vehicles",
    "activities",
)

DEFAULT_CONCEPT_HISTOGRAM = {
    "people": 0.18,
    "animals": 0.14,
    "nature": 0.12,
    "objects": 0.10,
    "fantasy": 0.10,
    "art": 0.09,
    "food": 0.08,
    "architecture": 0.08,
    "vehicles": 0.06,
    "activities": 0.05,
}


@dataclass
class PromptRecord:
    id: str
    text: str
    source: str
    concept_category: str
    stylized: bool = False

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("prompt text must be nonempty")
        if self.source not in PROMPT_SOURCES:
            raise ValueError(f"unknown prompt source {self.source!r}")
        if self.concept_category not in CONCEPT_TAXONOMY:
            raise ValueError(f"unknown concept category {self.concept_category!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PromptRecord":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def write_prompts(prompts: list[PromptRecord], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for prompt in prompts:
            fh.write(json.dumps(prompt.to_dict(), sort_keys=True) + "\n")
    return path


def load_prompts(path: str | Path) -> list[PromptRecord]:
    prompts = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                prompts.append(PromptRecord.from_dict(json.loads(line)))
    return prompts


_SUBJECTS = {
    "people": ["an elderly fisherman", "a street musician", "two chess players",
               "a ballet dancer", "a welder at work", "a child flying a kite"],
    "animals": ["a red fox", "a humpback whale", "an owl in flight",
                "a sleeping cat", "a herd of elephants", "a chameleon"],
    "nature": ["a misty pine forest", "a desert at dusk", "a glacier lagoon",
               "rolling wheat fields", "a coral reef", "a thunderstorm over hills"],
    "objects": ["a brass pocket watch", "a stack of old books", "a chipped teacup",
                "a mechanical keyboard", "a kerosene lantern", "a violin"],
    "fantasy": ["a dragon perched on ruins", "a floating castle",
                "a tiny robot wizard", "an underwater city",
                "a tree with glowing fruit", "a knight made of clouds"],
    "art": ["a cubist portrait", "an abstract sculpture garden",
            "a mural of migrating birds", "a stained-glass window",
            "a charcoal still life", "a mosaic courtyard"],
    "food": ["a bowl of ramen", "a tiered berry cake", "fresh sourdough bread",
             "a platter of sushi", "a steaming espresso", "a farmers market stall"],
    "architecture": ["a brutalist library", "a timber-framed cottage",
                     "a spiral staircase", "a suspension bridge at night",
                     "a cliffside monastery", "a greenhouse atrium"],
    "vehicles": ["a vintage motorcycle", "a container ship", "a hot air balloon",
                 "a steam locomotive", "a solar-powered car", "a deep-sea submersible"],
    "activities": ["a marathon finish line", "a pottery class",
                   "a midnight street race", "a mountain summit celebration",
                   "a beach volleyball match", "a night market"],
}

_SETTINGS = ["at golden hour", "in heavy rain", "under neon lights",
             "on a foggy morning", "in winter", "against a starry sky",
             "in soft window light", "at low tide"]

_STYLES = ["as a loose watercolor sketch", "in flat cartoon style",
           "as a charcoal drawing", "in pixel-art style",
           "as a woodblock print", "in paper-cutout collage style"]


def _apportion(histogram: dict[str, float], n: int) -> dict[str, int]:
    """Largest-remainder apportionment of n prompts across categories."""
    total = sum(histogram.values())
    quotas = {c: n * w / total for c, w in histogram.items()}
    counts = {c: int(q) for c, q in quotas.items()}
    leftover = n - sum(counts.values())
    by_remainder = sorted(
        histogram, key=lambda c: (-(quotas[c] - counts[c]), CONCEPT_TAXONOMY.index(c))
    )
    for c in by_remainder[:leftover]:
        counts[c] += 1
    return counts


def generate_prompt_set(
    n: int,
    seed: int,
    source: str = "open-user-input-like",
    histogram: dict[str, float] | None = None,
    stylized_fraction: float = 0.25,
) -> list[PromptRecord]:
    """Template prompts whose category counts match `histogram` exactly.

    A `stylized_fraction` of prompts get a non-photorealistic style suffix and
    the stylized flag.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    histogram = histogram or DEFAULT_CONCEPT_HISTOGRAM
    for category in histogram:
        if category not in CONCEPT_TAXONOMY:
            raise ValueError(f"unknown concept category {category!r}")
    rng = np.random.default_rng(seed)
    counts = _apportion(histogram, n)

    prompts = []
    prefix = "oui" if source == "open-user-input-like" else "parti"
    i = 0
    for category in CONCEPT_TAXONOMY:
        for _ in range(counts.get(category, 0)):
            subject = _SUBJECTS[category][rng.integers(len(_SUBJECTS[category]))]
            setting = _SETTINGS[rng.integers(len(_SETTINGS))]
            stylized = bool(rng.random() < stylized_fraction)
            text = f"{subject} {setting}"
            if stylized:
                text = f"{text}, {_STYLES[rng.integers(len(_STYLES))]}"
            prompts.append(
                PromptRecord(
                    id=f"{prefix}-{i:05d}",
                    text=text,
                    source=source,
                    concept_category=category,
                    stylized=stylized,
                )
            )
            i += 1
    return prompts


def validate_prompt_distribution(
    prompts: list[PromptRecord],
    target_histogram: dict[str, float],
    tolerance: float = 0.1,
) -> tuple[bool, float]:
    """L1 distance between empirical and target category distributions.

    Returns (within_tolerance, l1_distance); the target may be given as
    counts or frequencies (it is normalized).
    """
    if not prompts:
        raise ValueError("no prompts to validate")
    for category in target_histogram:
        if category not in CONCEPT_TAXONOMY:
            raise ValueError(f"unknown concept category {category!r}")
    total = sum(target_histogram.values())
    if total <= 0:
        raise ValueError("target histogram must have positive mass")
    target = {c: target_histogram.get(c, 0.0) / total for c in CONCEPT_TAXONOMY}
    empirical = {c: 0 for c in CONCEPT_TAXONOMY}
    for prompt in prompts:
        empirical[prompt.concept_category] += 1
    l1 = sum(
        abs(empirical[c] / len(prompts) - target[c]) for c in CONCEPT_TAXONOMY
    )
    return l1 <= tolerance, l1
