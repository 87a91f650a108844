"""Diffusion noise schedules.

A schedule is just the cumulative signal-retention curve ``alpha_bar``:
``x_t = sqrt(alpha_bar[t]) * x0 + sqrt(1 - alpha_bar[t]) * noise``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class NoiseSchedule:
    """Validated ``alpha_bar`` curve for a fixed number of diffusion steps.

    ``alpha_bar`` must be strictly decreasing, start close to 1, and stay in
    (0, 1].  Vectors violating any of these are rejected at construction so
    downstream code never has to re-check.
    """

    num_steps: int
    alpha_bar: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.alpha_bar = np.asarray(self.alpha_bar, dtype=np.float64)
        if self.alpha_bar.ndim != 1 or len(self.alpha_bar) != self.num_steps:
            raise ValueError(
                f"alpha_bar must be a vector of length num_steps={self.num_steps}"
            )
        if self.num_steps < 1:
            raise ValueError("num_steps must be positive")
        if not np.all(np.isfinite(self.alpha_bar)):
            raise ValueError("alpha_bar contains non-finite entries")
        if np.any(self.alpha_bar <= 0.0) or np.any(self.alpha_bar > 1.0):
            raise ValueError("alpha_bar entries must lie in (0, 1]")
        if np.any(np.diff(self.alpha_bar) >= 0.0):
            raise ValueError("alpha_bar must be strictly decreasing")
        if self.alpha_bar[0] < 0.95:
            raise ValueError(
                f"alpha_bar[0]={self.alpha_bar[0]:.4f} is too far from 1"
            )

    def to_dict(self) -> dict:
        return {"num_steps": self.num_steps, "alpha_bar": self.alpha_bar.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSchedule":
        return cls(num_steps=int(d["num_steps"]), alpha_bar=np.asarray(d["alpha_bar"]))


def cosine_schedule(num_steps: int = 1000, s: float = 0.008) -> NoiseSchedule:
    """Cosine ``alpha_bar`` schedule.

    Built from clipped per-step betas so the cumulative product is strictly
    decreasing and never reaches 0 even for large ``num_steps``.
    """
    grid = np.linspace(0.0, 1.0, num_steps + 1)
    f = np.cos((grid + s) / (1.0 + s) * math.pi / 2.0) ** 2
    betas = 1.0 - f[1:] / f[:-1]
    betas = np.clip(betas, 1e-8, 0.999)
    alpha_bar = np.cumprod(1.0 - betas)
    return NoiseSchedule(num_steps=num_steps, alpha_bar=alpha_bar)


def linear_schedule(
    num_steps: int = 1000, beta_start: float = 1e-4, beta_end: float = 0.02
) -> NoiseSchedule:
    """Classic linear-beta schedule; mostly useful for small-step tests."""
    betas = np.linspace(beta_start, beta_end, num_steps)
    alpha_bar = np.cumprod(1.0 - betas)
    return NoiseSchedule(num_steps=num_steps, alpha_bar=alpha_bar)
