"""Toy U-Net denoiser with dual text-conditioning slots.

The two real knobs from the reference architecture survive at miniature
scale: channel width (``base_channels``) and stacked residual blocks per
stage (``res_blocks_per_stage``).  Both text slots are projected to a shared
context width and concatenated along the sequence axis for a single-head
cross-attention block at the bottleneck.

`analytic_param_count` recomputes the trainable-parameter total from the
config alone; the model must agree exactly, which pins the wiring down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
import torch.nn as nn
import torch.nn.functional as F


@dataclass
class DenoiserConfig:
    base_channels: int = 32
    res_blocks_per_stage: int = 2
    stages: int = 2
    cond_dim_a: int = 32
    cond_dim_b: int = 64
    in_channels: int = 4

    def __post_init__(self) -> None:
        if self.base_channels < 2 or self.base_channels % 2 != 0:
            raise ValueError("base_channels must be an even integer >= 2")
        for name in ("res_blocks_per_stage", "stages", "cond_dim_a", "cond_dim_b", "in_channels"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def stage_widths(self) -> list[int]:
        return [self.base_channels * (s + 1) for s in range(self.stages)]

    @property
    def time_dim(self) -> int:
        return 4 * self.base_channels

    @property
    def context_dim(self) -> int:
        return 2 * self.base_channels

    def to_dict(self) -> dict:
        return {
            "base_channels": self.base_channels,
            "res_blocks_per_stage": self.res_blocks_per_stage,
            "stages": self.stages,
            "cond_dim_a": self.cond_dim_a,
            "cond_dim_b": self.cond_dim_b,
            "in_channels": self.in_channels,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DenoiserConfig":
        return cls(**{k: int(v) for k, v in d.items()})


def _resblock_params(cin: int, cout: int, time_dim: int) -> int:
    total = 2 * cin                       # norm1
    total += 9 * cin * cout + cout        # conv1
    total += time_dim * cout + cout       # time projection
    total += 2 * cout                     # norm2
    total += 9 * cout * cout + cout       # conv2
    if cin != cout:
        total += cin * cout + cout        # 1x1 skip
    return total


def _attention_params(channels: int, context_dim: int) -> int:
    total = 2 * channels                            # norm
    total += channels * channels + channels         # to_q
    total += 2 * (context_dim * channels + channels)  # to_k, to_v
    total += channels * channels + channels         # to_out
    return total


def analytic_param_count(config: DenoiserConfig) -> int:
    """Closed-form trainable parameter count for `Denoiser(config)`."""
    b = config.base_channels
    td = config.time_dim
    ctx = config.context_dim
    widths = config.stage_widths
    r = config.res_blocks_per_stage

    total = b * td + td                  # time mlp layer 1
    total += td * td + td                # time mlp layer 2
    total += config.cond_dim_a * ctx + ctx
    total += config.cond_dim_b * ctx + ctx
    total += 9 * config.in_channels * b + b  # stem

    prev = b
    for s, w in enumerate(widths):
        for _ in range(r):
            total += _resblock_params(prev, w, td)
            prev = w
        if s < config.stages - 1:
            total += 9 * w * w + w       # strided downsample conv

    w_last = widths[-1]
    total += 2 * _resblock_params(w_last, w_last, td)
    total += _attention_params(w_last, ctx)

    for s in reversed(range(config.stages)):
        w = widths[s]
        if s < config.stages - 1:
            total += 9 * widths[s + 1] * w + w  # post-upsample conv
        cin = 2 * w                      # skip concatenation
        for _ in range(r):
            total += _resblock_params(cin, w, td)
            cin = w

    total += 2 * b                       # head norm
    total += 9 * b * config.in_channels + config.in_channels
    return total


def sinusoidal_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    """Standard transformer-style timestep embedding, shape [B, dim]."""
    half = dim // 2
    freqs = torch.exp(
        -math.log(10000.0) * torch.arange(half, dtype=torch.float64) / max(half - 1, 1)
    )
    args = t.to(torch.float64)[:, None] * freqs[None, :]
    return torch.cat([torch.sin(args), torch.cos(args)], dim=-1)


class ResBlock(nn.Module):
    def __init__(self, cin: int, cout: int, time_dim: int):
        super().__init__()
        self.norm1 = nn.GroupNorm(1, cin)
        self.conv1 = nn.Conv2d(cin, cout, 3, padding=1)
        self.time_proj = nn.Linear(time_dim, cout)
        self.norm2 = nn.GroupNorm(1, cout)
        self.conv2 = nn.Conv2d(cout, cout, 3, padding=1)
        self.skip = nn.Conv2d(cin, cout, 1) if cin != cout else nn.Identity()

    def forward(self, x: torch.Tensor, temb: torch.Tensor) -> torch.Tensor:
        h = self.conv1(F.silu(self.norm1(x)))
        h = h + self.time_proj(F.silu(temb))[:, :, None, None]
        h = self.conv2(F.silu(self.norm2(h)))
        return h + self.skip(x)


class CrossAttention(nn.Module):
    """Single-head cross-attention from spatial positions to context tokens."""

    def __init__(self, channels: int, context_dim: int):
        super().__init__()
        self.norm = nn.GroupNorm(1, channels)
        self.to_q = nn.Linear(channels, channels)
        self.to_k = nn.Linear(context_dim, channels)
        self.to_v = nn.Linear(context_dim, channels)
        self.to_out = nn.Linear(channels, channels)
        self.scale = channels**-0.5

    def forward(self, x: torch.Tensor, context: torch.Tensor) -> torch.Tensor:
        b, c, h, w = x.shape
        q = self.to_q(self.norm(x).flatten(2).transpose(1, 2))
        k = self.to_k(context)
        v = self.to_v(context)
        attn = torch.softmax(q @ k.transpose(1, 2) * self.scale, dim=-1)
        out = self.to_out(attn @ v).transpose(1, 2).reshape(b, c, h, w)
        return x + out


class Denoiser(nn.Module):
    """Epsilon-prediction U-Net; forward(x_t, t, cond_a, cond_b) -> eps_hat."""

    def __init__(self, config: DenoiserConfig):
        super().__init__()
        self.config = config
        b, td, ctx = config.base_channels, config.time_dim, config.context_dim
        widths = config.stage_widths
        r = config.res_blocks_per_stage

        self.time_mlp = nn.Sequential(nn.Linear(b, td), nn.SiLU(), nn.Linear(td, td))
        self.proj_a = nn.Linear(config.cond_dim_a, ctx)
        self.proj_b = nn.Linear(config.cond_dim_b, ctx)
        self.stem = nn.Conv2d(config.in_channels, b, 3, padding=1)

        self.down_blocks = nn.ModuleList()
        self.downsamples = nn.ModuleList()
        prev = b
        for s, w in enumerate(widths):
            stage = nn.ModuleList()
            for _ in range(r):
                stage.append(ResBlock(prev, w, td))
                prev = w
            self.down_blocks.append(stage)
            if s < config.stages - 1:
                self.downsamples.append(nn.Conv2d(w, w, 3, stride=2, padding=1))

        w_last = widths[-1]
        self.mid_block1 = ResBlock(w_last, w_last, td)
        self.mid_attn = CrossAttention(w_last, ctx)
        self.mid_block2 = ResBlock(w_last, w_last, td)

        self.up_convs = nn.ModuleList()
        self.up_blocks = nn.ModuleList()
        for s in reversed(range(config.stages)):
            w = widths[s]
            if s < config.stages - 1:
                self.up_convs.append(nn.Conv2d(widths[s + 1], w, 3, padding=1))
            else:
                self.up_convs.append(nn.Identity())
            stage = nn.ModuleList()
            cin = 2 * w
            for _ in range(r):
                stage.append(ResBlock(cin, w, td))
                cin = w
            self.up_blocks.append(stage)

        self.head_norm = nn.GroupNorm(1, b)
        self.head = nn.Conv2d(b, config.in_channels, 3, padding=1)

    @classmethod
    def create(cls, config: DenoiserConfig, seed: int = 0) -> "Denoiser":
        torch.manual_seed(seed)
        return cls(config)

    def param_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def _context(self, cond_a: torch.Tensor, cond_b: torch.Tensor) -> torch.Tensor:
        if cond_a.shape[-1] != self.config.cond_dim_a:
            raise ValueError(
                f"conditioning dim mismatch for slot A: expected "
                f"{self.config.cond_dim_a}, got {cond_a.shape[-1]}"
            )
        if cond_b.shape[-1] != self.config.cond_dim_b:
            raise ValueError(
                f"conditioning dim mismatch for slot B: expected "
                f"{self.config.cond_dim_b}, got {cond_b.shape[-1]}"
            )
        return torch.cat([self.proj_a(cond_a), self.proj_b(cond_b)], dim=1)

    def forward(
        self,
        x: torch.Tensor,
        t: torch.Tensor,
        cond_a: torch.Tensor,
        cond_b: torch.Tensor,
    ) -> torch.Tensor:
        if x.shape[1] != self.config.in_channels:
            raise ValueError(
                f"expected {self.config.in_channels} input channels, got {x.shape[1]}"
            )
        div = 2 ** (self.config.stages - 1)
        if x.shape[-1] % div or x.shape[-2] % div:
            raise ValueError(
                f"spatial dims {tuple(x.shape[-2:])} not divisible by {div}"
            )
        t = torch.as_tensor(t, dtype=torch.long)
        if t.dim() == 0:
            t = t.expand(x.shape[0])
        temb = self.time_mlp(
            sinusoidal_embedding(t, self.config.base_channels).to(x.dtype)
        )
        context = self._context(cond_a, cond_b)

        h = self.stem(x)
        skips = []
        for s, stage in enumerate(self.down_blocks):
            for block in stage:
                h = block(h, temb)
            skips.append(h)
            if s < self.config.stages - 1:
                h = self.downsamples[s](h)

        h = self.mid_block1(h, temb)
        h = self.mid_attn(h, context)
        h = self.mid_block2(h, temb)

        for i, s in enumerate(reversed(range(self.config.stages))):
            if s < self.config.stages - 1:
                h = F.interpolate(h, scale_factor=2, mode="nearest")
            h = self.up_convs[i](h)
            h = torch.cat([h, skips[s]], dim=1)
            for block in self.up_blocks[i]:
                h = block(h, temb)

        return self.head(F.silu(self.head_norm(h)))
