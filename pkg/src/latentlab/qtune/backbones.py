"""Diffusion backbone adapter for the quality-tuning trainer.

`DiffusionBackbone` wraps the denoiser (optionally behind a frozen
autoencoder) so quality-tuning can drive it through the generic interface.
With `autoencoder=None` the model diffuses directly in pixel space, which is
handy for small synthetic studies where the statistic of interest must not be
laundered through a learned codec.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from ..autoencoder.model import Autoencoder
from ..checkpoint import load_checkpoint, load_numpy_state, save_checkpoint, state_dict_to_numpy
from ..diffusion.conditioning import default_conditioners
from ..diffusion.denoiser import Denoiser, DenoiserConfig
from ..diffusion.noising import add_noise_with_offset
from ..diffusion.sampler import sample as ddim_sample
from ..diffusion.schedule import NoiseSchedule, cosine_schedule
from .backbone import Batch

_CKPT_KIND = "qtune-backbone"


class DiffusionBackbone:
    """Epsilon-prediction diffusion model behind the QTuneBackbone interface."""

    def __init__(
        self,
        denoiser: Denoiser,
        schedule: NoiseSchedule | None = None,
        autoencoder: Autoencoder | None = None,
        image_size: int = 16,
        sample_steps: int = 20,
        learning_rate: float = 1e-4,
        seed: int = 0,
    ):
        if autoencoder is not None:
            div = autoencoder.config.spatial_divisor
            if image_size % div != 0:
                raise ValueError(f"image_size {image_size} not divisible by {div}")
            if autoencoder.config.latent_channels != denoiser.config.in_channels:
                raise ValueError("autoencoder latent channels != denoiser in_channels")
        elif denoiser.config.in_channels != 3:
            raise ValueError("pixel-space backbone requires a 3-channel denoiser")

        self.denoiser = denoiser
        self.schedule = schedule or cosine_schedule()
        self.autoencoder = autoencoder
        self.image_size = image_size
        self.sample_steps = sample_steps
        self.learning_rate = learning_rate
        self.seed = seed
        self._rng = torch.Generator().manual_seed(seed)
        self._optimizer = torch.optim.Adam(
            denoiser.parameters(), lr=learning_rate
        )
        self._cond_a, self._cond_b = default_conditioners(
            denoiser.config.cond_dim_a, denoiser.config.cond_dim_b
        )
        self.steps_taken = 0

    def set_learning_rate(self, lr: float) -> None:
        self.learning_rate = lr
        for group in self._optimizer.param_groups:
            group["lr"] = lr

    @property
    def latent_size(self) -> int:
        if self.autoencoder is None:
            return self.image_size
        return self.image_size // self.autoencoder.config.spatial_divisor

    def _to_model_space(self, images: np.ndarray) -> torch.Tensor:
        x = torch.from_numpy(np.ascontiguousarray(images)).float()
        if self.autoencoder is None:
            return x
        with torch.no_grad():
            return self.autoencoder.encode_batch(x)

    def _embed(self, captions: list[str]) -> tuple[torch.Tensor, torch.Tensor]:
        return (
            torch.from_numpy(self._cond_a.embed_batch(captions)),
            torch.from_numpy(self._cond_b.embed_batch(captions)),
        )

    def _loss(self, batch: Batch, noise_offset: float,
              rng: torch.Generator) -> torch.Tensor:
        images, captions = batch
        latents = self._to_model_space(images)
        emb_a, emb_b = self._embed(captions)
        t = torch.randint(0, self.schedule.num_steps, (latents.shape[0],),
                          generator=rng)
        x_t, eps_target = add_noise_with_offset(
            latents, t, self.schedule, noise_offset, rng
        )
        eps_hat = self.denoiser(x_t, t, emb_a, emb_b)
        return F.mse_loss(eps_hat, eps_target)

    def train_step(self, batch: Batch, noise_offset: float) -> float:
        self.denoiser.train()
        loss = self._loss(batch, noise_offset, self._rng)
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        self.steps_taken += 1
        value = loss.item()
        if not np.isfinite(value):
            raise RuntimeError(f"non-finite training loss: {value}")
        return value

    def eval_loss(self, batch: Batch, noise_offset: float = 0.0) -> float:
        """Deterministic proxy loss on a fixed rng stream (comparable across calls)."""
        self.denoiser.eval()
        rng = torch.Generator().manual_seed(self.seed + 0x9E3779B9)
        with torch.no_grad():
            return self._loss(batch, noise_offset, rng).item()

    def sample(self, prompt: str, seed: int) -> np.ndarray:
        cond_a = torch.from_numpy(self._cond_a.embed(prompt))
        cond_b = torch.from_numpy(self._cond_b.embed(prompt))
        hw = self.latent_size
        latent = ddim_sample(
            self.denoiser, self.schedule, cond_a, cond_b, (hw, hw),
            steps=self.sample_steps, seed=seed,
        )
        if self.autoencoder is None:
            return latent.clamp(-1.0, 1.0).numpy()
        with torch.no_grad():
            return self.autoencoder.decode_batch(latent[None], clamp=True)[0].numpy()

    def save(self, path: str | Path) -> Path:
        state = {"denoiser": state_dict_to_numpy(self.denoiser)}
        if self.autoencoder is not None:
            state["autoencoder"] = state_dict_to_numpy(self.autoencoder)
        return save_checkpoint(
            path,
            kind=_CKPT_KIND,
            config={
                "denoiser": self.denoiser.config.to_dict(),
                "autoencoder": (
                    self.autoencoder.config.to_dict() if self.autoencoder else None
                ),
                "image_size": self.image_size,
                "sample_steps": self.sample_steps,
                "schedule_num_steps": self.schedule.num_steps,
            },
            state=state,
            step=self.steps_taken,
        )

    def load(self, path: str | Path) -> None:
        payload = load_checkpoint(path, expect_kind=_CKPT_KIND)
        load_numpy_state(self.denoiser, payload["state"]["denoiser"])
        if self.autoencoder is not None and "autoencoder" in payload["state"]:
            load_numpy_state(self.autoencoder, payload["state"]["autoencoder"])
        self.steps_taken = payload["step"]

    @classmethod
    def restore(cls, path: str | Path, learning_rate: float = 1e-4,
                seed: int = 0) -> "DiffusionBackbone":
        """Rebuild a backbone (model included) from a `save` checkpoint."""
        payload = load_checkpoint(path, expect_kind=_CKPT_KIND)
        cfg = payload["config"]
        denoiser = Denoiser(DenoiserConfig.from_dict(cfg["denoiser"]))
        autoencoder = None
        if cfg["autoencoder"] is not None:
            from ..autoencoder.config import AEConfig

            autoencoder = Autoencoder(AEConfig.from_dict(cfg["autoencoder"]))
        backbone = cls(
            denoiser,
            schedule=cosine_schedule(cfg["schedule_num_steps"]),
            autoencoder=autoencoder,
            image_size=cfg["image_size"],
            sample_steps=cfg["sample_steps"],
            learning_rate=learning_rate,
            seed=seed,
        )
        backbone.load(path)
        return backbone

    @classmethod
    def from_pretrained_denoiser(
        cls,
        denoiser_ckpt: str | Path,
        ae_ckpt: str | Path | None = None,
        learning_rate: float = 1e-4,
        seed: int = 0,
        sample_steps: int = 20,
    ) -> "DiffusionBackbone":
        """Adapt a `pretrain` checkpoint (plus its autoencoder) for tuning."""
        payload = load_checkpoint(denoiser_ckpt, expect_kind="denoiser")
        denoiser = Denoiser(DenoiserConfig.from_dict(payload["config"]))
        load_numpy_state(denoiser, payload["state"])
        extra = payload.get("extra", {})
        ae_path = ae_ckpt or extra.get("ae_ckpt")
        autoencoder = Autoencoder.load(ae_path) if ae_path else None
        return cls(
            denoiser,
            schedule=cosine_schedule(int(extra.get("schedule_num_steps", 1000))),
            autoencoder=autoencoder,
            image_size=int(extra.get("stage_resolution", 16)),
            sample_steps=sample_steps,
            learning_rate=learning_rate,
            seed=seed,
        )
