"""Progressive-resolution pre-training for the latent denoiser.

Images are re-encoded to latents at each stage's resolution, stages run in
order, and the configured noise offset is applied only in the final stage
(earlier stages use offset 0).  A checkpoint is written at every stage
boundary; a non-finite loss aborts with a pointer to the last good one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from ..autoencoder.model import Autoencoder
from ..checkpoint import save_checkpoint, state_dict_to_numpy
from ..data.images import resize_image
from .conditioning import default_conditioners
from .denoiser import Denoiser, DenoiserConfig
from .noising import add_noise_with_offset
from .schedule import NoiseSchedule, cosine_schedule


@dataclass
class TextCond:
    """Per-slot conditioning toggles; a disabled slot feeds zeros."""

    slot_a: bool = True
    slot_b: bool = True


@dataclass
class TrainConfig:
    resolutions: list[tuple[int, int]] = field(default_factory=lambda: [(32, 1000)])
    noise_offset: float = 0.02
    batch_size: int = 16
    learning_rate: float = 1e-3
    seed: int = 0
    text_cond: TextCond = field(default_factory=TextCond)
    cond_dropout_prob: float = 0.1

    def __post_init__(self) -> None:
        if isinstance(self.text_cond, dict):
            self.text_cond = TextCond(**self.text_cond)
        self.resolutions = [(int(px), int(steps)) for px, steps in self.resolutions]
        if not self.resolutions:
            raise ValueError("resolutions must contain at least one stage")
        px_values = [px for px, _ in self.resolutions]
        if any(b <= a for a, b in zip(px_values, px_values[1:])):
            raise ValueError("stage resolutions must be strictly increasing")
        if any(steps < 1 for _, steps in self.resolutions):
            raise ValueError("every stage needs a positive step budget")
        if self.noise_offset < 0:
            raise ValueError("noise_offset must be nonnegative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if not 0.0 <= self.cond_dropout_prob < 1.0:
            raise ValueError("cond_dropout_prob must lie in [0, 1)")

    def to_dict(self) -> dict:
        return {
            "resolutions": [list(r) for r in self.resolutions],
            "noise_offset": self.noise_offset,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "text_cond": {"slot_a": self.text_cond.slot_a, "slot_b": self.text_cond.slot_b},
            "cond_dropout_prob": self.cond_dropout_prob,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        d["resolutions"] = [tuple(r) for r in d.get("resolutions", [(32, 1000)])]
        return cls(**d)


def train_step(
    model: Denoiser,
    batch: tuple[torch.Tensor, torch.Tensor, torch.Tensor],
    config: TrainConfig,
    schedule: NoiseSchedule,
    optimizer: torch.optim.Optimizer,
    rng: torch.Generator,
    noise_offset: float | None = None,
) -> float:
    """One epsilon-prediction MSE update; returns the scalar loss.

    ``noise_offset`` overrides ``config.noise_offset`` so the progressive
    trainer can disable the offset in non-final stages.
    """
    latents, cond_a, cond_b = batch
    if not torch.isfinite(latents).all():
        raise ValueError("batch contains non-finite latents")
    offset = config.noise_offset if noise_offset is None else noise_offset

    bsz = latents.shape[0]
    t = torch.randint(0, schedule.num_steps, (bsz,), generator=rng)
    x_t, eps_target = add_noise_with_offset(latents, t, schedule, offset, rng)

    if config.cond_dropout_prob > 0:
        drop = torch.rand(bsz, generator=rng) < config.cond_dropout_prob
        cond_a = torch.where(drop[:, None, None], torch.zeros_like(cond_a), cond_a)
        cond_b = torch.where(drop[:, None, None], torch.zeros_like(cond_b), cond_b)

    eps_hat = model(x_t, t, cond_a, cond_b)
    loss = F.mse_loss(eps_hat, eps_target)
    optimizer.zero_grad()
    loss.backward()
    optimizer.step()

    value = loss.item()
    if not np.isfinite(value):
        raise RuntimeError(f"non-finite training loss: {value}")
    return value


def _encode_stage_latents(
    autoencoder: Autoencoder, images: np.ndarray, resolution: int
) -> torch.Tensor:
    divisor = autoencoder.config.spatial_divisor
    if resolution % divisor != 0:
        raise ValueError(
            f"stage resolution {resolution} not divisible by {divisor}"
        )
    resized = np.stack([resize_image(img, resolution) for img in images])
    with torch.no_grad():
        latents = autoencoder.encode_batch(torch.from_numpy(resized))
    return latents


def pretrain(
    model: Denoiser,
    autoencoder: Autoencoder,
    images: np.ndarray,
    captions: list[str],
    config: TrainConfig,
    out_dir: str | Path,
    schedule: NoiseSchedule | None = None,
    extra_meta: dict | None = None,
) -> tuple[list[Path], dict]:
    """Run all resolution stages; returns (checkpoint paths, history).

    History contains the full loss sequence plus per-stage boundaries so the
    run log can be audited: ``{"loss": [...], "stage_end_steps": [...]}``.
    """
    if len(images) != len(captions):
        raise ValueError("images and captions must have equal length")
    if len(images) == 0:
        raise ValueError("dataset is empty")
    schedule = schedule or cosine_schedule()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    slot_a, slot_b = default_conditioners(
        model.config.cond_dim_a, model.config.cond_dim_b
    )
    emb_a = torch.from_numpy(slot_a.embed_batch(captions))
    emb_b = torch.from_numpy(slot_b.embed_batch(captions))
    if not config.text_cond.slot_a:
        emb_a = torch.zeros_like(emb_a)
    if not config.text_cond.slot_b:
        emb_b = torch.zeros_like(emb_b)

    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    torch_rng = torch.Generator().manual_seed(config.seed)
    batch_rng = np.random.default_rng(config.seed)

    history: dict = {"loss": [], "stage_end_steps": [], "stage_resolutions": []}
    ckpt_paths: list[Path] = []
    last_good: Path | None = None
    global_step = 0
    final_stage = len(config.resolutions) - 1

    for stage_idx, (resolution, budget) in enumerate(config.resolutions):
        latents = _encode_stage_latents(autoencoder, images, resolution)
        offset = config.noise_offset if stage_idx == final_stage else 0.0

        model.train()
        for _ in range(budget):
            idx = batch_rng.integers(0, len(images), size=config.batch_size)
            batch = (latents[idx], emb_a[idx], emb_b[idx])
            try:
                loss = train_step(
                    model, batch, config, schedule, optimizer, torch_rng,
                    noise_offset=offset,
                )
            except RuntimeError as exc:
                pointer = str(last_good) if last_good else "none"
                raise RuntimeError(
                    f"{exc} at step {global_step + 1}; "
                    f"last good checkpoint: {pointer}"
                ) from exc
            history["loss"].append(loss)
            global_step += 1

        path = out_dir / f"denoiser_step_{global_step:06d}.ckpt"
        save_checkpoint(
            path,
            kind="denoiser",
            config=model.config.to_dict(),
            state=state_dict_to_numpy(model),
            step=global_step,
            extra={
                "stage_resolution": resolution,
                "train_config": config.to_dict(),
                "schedule_num_steps": schedule.num_steps,
                **(extra_meta or {}),
            },
        )
        ckpt_paths.append(path)
        last_good = path
        history["stage_end_steps"].append(global_step)
        history["stage_resolutions"].append(resolution)

    return ckpt_paths, history
