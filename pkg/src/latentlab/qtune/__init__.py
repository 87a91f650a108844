"""Quality-tuning: small curated dataset, raised noise offset, hard stop."""

from .backbone import Batch, ConformanceError, QTuneBackbone, check_backbone
from .backbones import DiffusionBackbone
from .config import HARD_ITERATION_CAP, QTuneConfig
from .trainer import check_early_stop, make_ablation_subsets, quality_tune

__all__ = [
    "Batch",
    "ConformanceError",
    "QTuneBackbone",
    "check_backbone",
    "DiffusionBackbone",
    "HARD_ITERATION_CAP",
    "QTuneConfig",
    "check_early_stop",
    "make_ablation_subsets",
    "quality_tune",
]
