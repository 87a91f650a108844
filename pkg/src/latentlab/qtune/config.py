"""Quality-tuning configuration."""

from __future__ import annotations

from dataclasses import dataclass

HARD_ITERATION_CAP = 15_000


@dataclass
class QTuneConfig:
    """Recipe knobs: tiny dataset, small batch, raised offset, hard stop.

    `max_iterations` above the 15000 cap is a contract violation unless
    `allow_exceed_cap` is set explicitly — the cap is the point of the recipe,
    not a tunable.
    """

    batch_size: int = 64
    noise_offset: float = 0.1
    max_iterations: int = HARD_ITERATION_CAP
    eval_every: int = 200
    early_stop_patience: int = 5
    learning_rate: float = 1e-4
    seed: int = 0
    subset_size: int | None = None
    allow_exceed_cap: bool = False

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.noise_offset < 0:
            raise ValueError("noise_offset must be nonnegative")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.max_iterations > HARD_ITERATION_CAP and not self.allow_exceed_cap:
            raise ValueError(
                f"max_iterations={self.max_iterations} exceeds the "
                f"{HARD_ITERATION_CAP} cap; set allow_exceed_cap=True to override"
            )
        if self.eval_every < 1:
            raise ValueError("eval_every must be >= 1")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")
        if self.subset_size is not None and self.subset_size < 1:
            raise ValueError("subset_size must be positive when given")

    def to_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "noise_offset": self.noise_offset,
            "max_iterations": self.max_iterations,
            "eval_every": self.eval_every,
            "early_stop_patience": self.early_stop_patience,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "subset_size": self.subset_size,
            "allow_exceed_cap": self.allow_exceed_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QTuneConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})
