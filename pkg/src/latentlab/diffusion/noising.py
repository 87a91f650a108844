"""Forward-process noising, with the channel-wise noise offset.

The offset adds one constant Gaussian draw per channel (broadcast over the
spatial dims) on top of the usual per-element noise:

    eps_target = eps + offset * eps_c
    x_t = sqrt(alpha_bar[t]) * x0 + sqrt(1 - alpha_bar[t]) * eps_target

With offset=0 this is bit-identical to standard noising under the same rng
stream: the channel draw is skipped entirely, not multiplied by zero.
"""

from __future__ import annotations

import torch

from .schedule import NoiseSchedule


def add_noise_with_offset(
    x0: torch.Tensor,
    t: int | torch.Tensor,
    schedule: NoiseSchedule,
    offset: float,
    rng: torch.Generator,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Noise ``x0`` to step ``t``; returns ``(x_t, eps_target)``.

    ``x0`` is ``[C, H, W]`` or ``[B, C, H, W]``; ``t`` is a scalar step index
    or a per-sample integer tensor matching the batch dim.  The prediction
    target is the offset-augmented noise, so the denoiser is trained to
    regress ``eps + offset * eps_c``.
    """
    if offset < 0:
        raise ValueError(f"offset must be nonnegative, got {offset}")
    if x0.dim() not in (3, 4):
        raise ValueError(f"expected [C,H,W] or [B,C,H,W], got shape {tuple(x0.shape)}")

    t_idx = torch.as_tensor(t, dtype=torch.long)
    if torch.any(t_idx < 0) or torch.any(t_idx >= schedule.num_steps):
        raise ValueError(
            f"step index out of range [0, {schedule.num_steps}): {t}"
        )

    alpha_bar = torch.as_tensor(schedule.alpha_bar, dtype=x0.dtype)[t_idx]
    if t_idx.dim() > 0:
        if x0.dim() != 4 or len(t_idx) != x0.shape[0]:
            raise ValueError("per-sample t requires a matching batch dimension")
        alpha_bar = alpha_bar.view(-1, 1, 1, 1)

    eps = torch.randn(x0.shape, generator=rng, dtype=x0.dtype)
    if offset > 0:
        chan_shape = x0.shape[:-2] + (1, 1)
        eps_c = torch.randn(chan_shape, generator=rng, dtype=x0.dtype)
        eps_target = eps + offset * eps_c
    else:
        eps_target = eps

    x_t = torch.sqrt(alpha_bar) * x0 + torch.sqrt(1.0 - alpha_bar) * eps_target
    return x_t, eps_target
