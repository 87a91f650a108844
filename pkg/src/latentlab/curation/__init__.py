"""Data curation funnel: automatic cascade plus two-stage human filtering."""

from .filters import (
    apply_predicate_filters,
    balance_concepts,
    rank_by_engagement,
)
from .records import (
    CascadeConfig,
    ChecklistVerdict,
    CurationStage,
    ImageRecord,
    StateError,
)
from .resize import resize_to_target
from .scoring import StubScorer, synthetic_records
from .store import CurationStore, ExportBlockedError

__all__ = [
    "CascadeConfig",
    "ChecklistVerdict",
    "CurationStage",
    "CurationStore",
    "ExportBlockedError",
    "ImageRecord",
    "StateError",
    "StubScorer",
    "apply_predicate_filters",
    "balance_concepts",
    "rank_by_engagement",
    "resize_to_target",
    "synthetic_records",
]
