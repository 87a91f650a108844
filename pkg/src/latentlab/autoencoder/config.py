"""Autoencoder configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any


@dataclass
class AEConfig:
    """Knobs for the autoencoder family.

    ``downsample_blocks`` 2x2 blocks give an area compression factor of
    ``4 ** downsample_blocks`` (64x at the default of 3). The Fourier lift,
    when enabled, raises the effective input channel count from 3 to
    ``3 + 6 * fourier_num_freqs``.
    """

    latent_channels: int = 4
    downsample_blocks: int = 3
    use_fourier_lift: bool = False
    fourier_num_freqs: int = 4
    use_adversarial_loss: bool = False
    base_width: int = 32
    recon_loss_weight: float = 1.0
    adv_loss_weight: float = 0.05
    kl_or_reg_weight: float = 1e-6

    def __post_init__(self) -> None:
        if self.latent_channels < 1:
            raise ValueError("latent_channels must be >= 1")
        if self.downsample_blocks < 1:
            raise ValueError("downsample_blocks must be >= 1")
        if self.fourier_num_freqs < 0:
            raise ValueError("fourier_num_freqs must be >= 0")
        if self.base_width < 1:
            raise ValueError("base_width must be >= 1")
        for name in ("recon_loss_weight", "adv_loss_weight", "kl_or_reg_weight"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def spatial_divisor(self) -> int:
        return 2**self.downsample_blocks

    @property
    def compression_factor(self) -> int:
        """Area compression per the 2x2 block count."""
        return 4**self.downsample_blocks

    @property
    def effective_in_channels(self) -> int:
        if self.use_fourier_lift:
            return 3 + 6 * self.fourier_num_freqs
        return 3

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AEConfig":
        return cls(**data)
