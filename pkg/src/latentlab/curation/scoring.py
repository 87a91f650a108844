"""Pluggable scorers plus deterministic synthetic records for tests/demos.

Real aesthetic/CLIP/OCR models are out of scope; scores normally arrive in
the ingest manifest.  `StubScorer` fills any missing scores from a hash of
the record id so pipelines can run end-to-end without model weights.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .records import ImageRecord

DEFAULT_CONCEPTS = ("portrait", "food", "animal", "landscape", "car", "other")


class StubScorer:
    """Deterministic stand-in scorer keyed on record id."""

    def __init__(self, salt: str = "stub-scorer"):
        self.salt = salt

    def _rng(self, record_id: str) -> np.random.Generator:
        digest = hashlib.blake2b(
            f"{self.salt}|{record_id}".encode(), digest_size=8
        ).digest()
        return np.random.default_rng(int.from_bytes(digest, "big"))

    def score(self, record: ImageRecord) -> ImageRecord:
        """Fill aesthetic/clip/ocr/engagement in place when unset; returns it."""
        rng = self._rng(record.id)
        draws = rng.uniform(0.0, 1.0, size=4)
        if record.aesthetic_score == 0.0:
            record.aesthetic_score = round(float(draws[0]), 6)
        if record.clip_score == 0.0:
            record.clip_score = round(float(draws[1]), 6)
        if record.ocr_word_count == 0:
            record.ocr_word_count = int(draws[2] * 40)
        if record.engagement == 0.0:
            record.engagement = round(float(draws[3] * 10_000), 2)
        return record


def synthetic_records(
    n: int,
    seed: int = 0,
    concepts: tuple[str, ...] = DEFAULT_CONCEPTS,
    malformed_every: int = 0,
) -> list[ImageRecord]:
    """Generate `n` records with known score distributions for oracle tests.

    With `malformed_every` = m > 0, every m-th record gets non-positive
    dimensions so the "malformed" rejection path is exercised.
    """
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        side_a = int(rng.integers(128, 2048))
        side_b = int(rng.integers(128, 2048))
        record = ImageRecord(
            id=f"img-{i:06d}",
            uri=f"synthetic://img-{i:06d}",
            width=side_a,
            height=side_b,
            caption=f"synthetic image {i}",
            aesthetic_score=round(float(rng.uniform()), 6),
            clip_score=round(float(rng.uniform()), 6),
            ocr_word_count=int(rng.integers(0, 40)),
            engagement=round(float(rng.uniform(0, 10_000)), 2),
            concept=str(rng.choice(list(concepts))),
        )
        if malformed_every and i % malformed_every == malformed_every - 1:
            record.width = 0
        records.append(record)
    return records
