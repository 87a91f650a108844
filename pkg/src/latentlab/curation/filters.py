"""Automatic filter cascade: predicates, concept balancing, engagement ranking.

Survivorship is a pure conjunction of inclusive predicates, so the survivor
set cannot depend on filter order; only the rejection *attribution* (which
filter gets the blame) uses the declared order.
"""

from __future__ import annotations

import hashlib
import math
from typing import Callable, Iterable

from .records import CascadeConfig, ImageRecord


def content_filter(record: ImageRecord) -> bool:
    """Offensive-content predicate stub.

    Always passes.  Real deployments must plug in an actual classifier; the
    cascade only includes this hook when `content_filter_enabled` is set, so
    enabling it without replacing the stub is an explicit no-op choice.
    """
    return True


def build_predicates(
    config: CascadeConfig,
) -> list[tuple[str, Callable[[ImageRecord], bool]]]:
    """Named predicates in declared order (used for rejection attribution)."""
    predicates: list[tuple[str, Callable[[ImageRecord], bool]]] = [
        ("aesthetic", lambda r: r.aesthetic_score >= config.aesthetic_min),
        ("clip", lambda r: r.clip_score >= config.clip_min),
        ("ocr", lambda r: r.ocr_word_count <= config.ocr_max_words),
        ("min_side", lambda r: min(r.width, r.height) >= config.min_side_px),
        (
            "aspect",
            lambda r: config.aspect_ratio_min
            <= r.aspect_ratio
            <= config.aspect_ratio_max,
        ),
    ]
    if config.content_filter_enabled:
        predicates.append(("content", content_filter))
    return predicates


def apply_predicate_filters(
    records: Iterable[ImageRecord], config: CascadeConfig
) -> tuple[list[ImageRecord], dict[str, int]]:
    """Evaluate the conjunction; returns (survivors, rejection counts).

    Malformed records never survive and are counted under "malformed".
    Rejected well-formed records are attributed to the first failing
    predicate in declared order.
    """
    predicates = build_predicates(config)
    survivors: list[ImageRecord] = []
    rejections: dict[str, int] = {}

    for record in records:
        if record.problems():
            rejections["malformed"] = rejections.get("malformed", 0) + 1
            continue
        failed = next(
            (name for name, pred in predicates if not pred(record)), None
        )
        if failed is None:
            survivors.append(record)
        else:
            rejections[failed] = rejections.get(failed, 0) + 1
    return survivors, rejections


def rejection_reason(record: ImageRecord, config: CascadeConfig) -> str | None:
    """First failing predicate name for one record, or None if it survives."""
    if record.problems():
        return "malformed"
    for name, pred in build_predicates(config):
        if not pred(record):
            return name
    return None


def _tiebreak_key(seed: int, record_id: str) -> int:
    digest = hashlib.blake2b(
        f"{seed}|{record_id}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def rank_by_engagement(records: Iterable[ImageRecord], k: int) -> list[ImageRecord]:
    """Top-k by engagement descending, ties broken by id ascending."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ranked = sorted(records, key=lambda r: (-r.engagement, r.id))
    return ranked[:k]


def balance_concepts(
    records: Iterable[ImageRecord],
    quotas: dict[str, float],
    budget: int,
    seed: int,
) -> list[ImageRecord]:
    """Cap each concept at ceil(quota * budget), then truncate to the budget.

    Within a concept, records are taken by descending engagement with a
    seeded-random tiebreak; the global truncation uses the same ordering.
    Concepts absent from a non-empty quota map are excluded; an empty map
    means "no balancing" and falls back to plain engagement ranking.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    records = list(records)
    if not quotas:
        return rank_by_engagement(records, budget)

    def order_key(r: ImageRecord) -> tuple:
        return (-r.engagement, _tiebreak_key(seed, r.id))

    chosen: list[ImageRecord] = []
    by_concept: dict[str, list[ImageRecord]] = {}
    for record in records:
        by_concept.setdefault(record.concept, []).append(record)

    for concept, members in by_concept.items():
        quota = quotas.get(concept)
        if quota is None:
            continue
        cap = math.ceil(quota * budget)
        chosen.extend(sorted(members, key=order_key)[:cap])

    chosen.sort(key=order_key)
    return chosen[:budget]
