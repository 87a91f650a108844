"""Convolutional image autoencoder with a Gaussian latent.

The encoder produces (mean, logvar) per latent channel; ``encode`` returns
the mean, so encoding is deterministic given weights. Sampling only happens
inside the training loop (reparameterization for the KL term).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from latentlab.autoencoder.config import AEConfig
from latentlab.autoencoder.fourier import fourier_lift
from latentlab.checkpoint import (
    load_checkpoint,
    load_numpy_state,
    save_checkpoint,
    state_dict_to_numpy,
)


@dataclass
class LatentTensor:
    """Encoded image with its shape contract.

    ``data`` has shape [latent_channels, H/2^d, W/2^d] for a source image of
    resolution (H, W) and d downsampling blocks.
    """

    data: np.ndarray
    source_resolution: tuple[int, int]

    def __post_init__(self) -> None:
        if self.data.ndim != 3:
            raise ValueError(f"latent must be [C,h,w], got shape {self.data.shape}")


def _stage_widths(config: AEConfig) -> list[int]:
    # width doubles per downsampling block, capped at 4x base
    return [config.base_width * min(2**i, 4) for i in range(config.downsample_blocks + 1)]


class Autoencoder(nn.Module):
    def __init__(self, config: AEConfig):
        super().__init__()
        self.config = config
        widths = _stage_widths(config)

        enc: list[nn.Module] = [
            nn.Conv2d(config.effective_in_channels, widths[0], 3, padding=1),
            nn.SiLU(),
        ]
        for i in range(config.downsample_blocks):
            enc += [nn.Conv2d(widths[i], widths[i + 1], 3, stride=2, padding=1), nn.SiLU()]
        enc += [nn.Conv2d(widths[-1], 2 * config.latent_channels, 3, padding=1)]
        self.encoder = nn.Sequential(*enc)

        dec: list[nn.Module] = [
            nn.Conv2d(config.latent_channels, widths[-1], 3, padding=1),
            nn.SiLU(),
        ]
        for i in range(config.downsample_blocks, 0, -1):
            dec += [
                nn.Upsample(scale_factor=2, mode="nearest"),
                nn.Conv2d(widths[i], widths[i - 1], 3, padding=1),
                nn.SiLU(),
            ]
        dec += [nn.Conv2d(widths[0], 3, 3, padding=1)]
        self.decoder = nn.Sequential(*dec)

    @classmethod
    def create(cls, config: AEConfig, seed: int = 0) -> "Autoencoder":
        """Build with deterministic weight initialization."""
        torch.manual_seed(seed)
        return cls(config)

    # -- torch-facing paths ------------------------------------------------

    def _lift(self, x: torch.Tensor) -> torch.Tensor:
        if self.config.use_fourier_lift:
            return fourier_lift(x, self.config.fourier_num_freqs)
        return x

    def encode_moments(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Batch [B,3,H,W] -> (mean, logvar), each [B,C,h,w]."""
        self._check_resolution(x.shape[-2], x.shape[-1])
        moments = self.encoder(self._lift(x))
        mean, logvar = torch.chunk(moments, 2, dim=1)
        return mean, logvar.clamp(-30.0, 20.0)

    def encode_batch(self, x: torch.Tensor) -> torch.Tensor:
        """Deterministic encode (mean path) for a batch."""
        return self.encode_moments(x)[0]

    def decode_batch(self, z: torch.Tensor, clamp: bool = True) -> torch.Tensor:
        if z.shape[1] != self.config.latent_channels:
            raise ValueError(
                f"latent has {z.shape[1]} channels, config expects "
                f"{self.config.latent_channels}"
            )
        out = self.decoder(z)
        return out.clamp(-1.0, 1.0) if clamp else out

    # -- numpy-facing single-image operations -------------------------------

    @torch.no_grad()
    def encode(self, image: np.ndarray) -> LatentTensor:
        """Encode one [3,H,W] image to a LatentTensor."""
        x = torch.from_numpy(np.asarray(image, dtype=np.float32)).unsqueeze(0)
        mean = self.encode_batch(x)[0]
        return LatentTensor(
            data=mean.numpy(),
            source_resolution=(image.shape[1], image.shape[2]),
        )

    @torch.no_grad()
    def decode(self, latent: LatentTensor) -> np.ndarray:
        """Decode a LatentTensor back to a clamped [3,H,W] image."""
        if latent.data.shape[0] != self.config.latent_channels:
            raise ValueError(
                f"latent has {latent.data.shape[0]} channels, config expects "
                f"{self.config.latent_channels}"
            )
        z = torch.from_numpy(np.asarray(latent.data, dtype=np.float32)).unsqueeze(0)
        out = self.decode_batch(z)[0].numpy()
        h, w = latent.source_resolution
        if out.shape[1:] != (h, w):
            raise ValueError(
                f"decoded resolution {out.shape[1:]} != source {latent.source_resolution}"
            )
        return out

    def _check_resolution(self, h: int, w: int) -> None:
        div = self.config.spatial_divisor
        if h % div or w % div:
            raise ValueError(
                f"input resolution {h}x{w} not divisible by {div} "
                f"(2^{self.config.downsample_blocks} downsampling blocks)"
            )

    # -- persistence ---------------------------------------------------------

    def save(self, path: str | Path, step: int = 0) -> Path:
        return save_checkpoint(
            path,
            kind="autoencoder",
            config=self.config.to_dict(),
            state=state_dict_to_numpy(self),
            step=step,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Autoencoder":
        payload = load_checkpoint(path, expect_kind="autoencoder")
        model = cls(AEConfig.from_dict(payload["config"]))
        load_numpy_state(model, payload["state"])
        return model


class PatchDiscriminator(nn.Module):
    """Small patch discriminator for the optional adversarial term."""

    def __init__(self, base_width: int = 32):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(3, base_width, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(base_width, base_width * 2, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(base_width * 2, 1, 3, padding=1),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)
