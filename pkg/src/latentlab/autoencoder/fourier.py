"""Non-learnable sinusoidal channel lift applied to RGB inputs.

gamma(x) = [x, sin(2^0 pi x), cos(2^0 pi x), ..., sin(2^(k-1) pi x), cos(2^(k-1) pi x)]

Each frequency band contributes one sin block and one cos block of 3
channels, so the output has ``3 + 6k`` channels. The first 3 output
channels are the input, copied bit-for-bit.
"""

from __future__ import annotations

import math

import torch


def fourier_lift(image: torch.Tensor, num_freqs: int) -> torch.Tensor:
    """Lift ``[..., 3, H, W]`` pixels to ``[..., 3 + 6*num_freqs, H, W]``.

    Deterministic and non-learnable; computed in the input dtype. Rejects
    non-finite inputs and negative frequency counts.
    """
    if num_freqs < 0:
        raise ValueError("num_freqs must be >= 0")
    if not torch.isfinite(image).all():
        raise ValueError("fourier_lift requires finite pixel values")
    blocks = [image]
    for j in range(num_freqs):
        scaled = (2.0**j) * math.pi * image
        blocks.append(torch.sin(scaled))
        blocks.append(torch.cos(scaled))
    return torch.cat(blocks, dim=-3)
