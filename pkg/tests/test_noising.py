import numpy as np
import pytest
import torch

from latentlab.diffusion.noising import add_noise_with_offset
from latentlab.diffusion.schedule import NoiseSchedule, cosine_schedule


def test_zero_offset_matches_standard_noising_bitwise():
    """With offset=0 the rng stream must be consumed exactly like plain noising."""
    sched = cosine_schedule(100)
    x0 = torch.randn(4, 3, 8, 8, generator=torch.Generator().manual_seed(3))

    rng = torch.Generator().manual_seed(42)
    x_t, eps_target = add_noise_with_offset(x0, 17, sched, 0.0, rng)

    rng_ref = torch.Generator().manual_seed(42)
    eps = torch.randn(x0.shape, generator=rng_ref, dtype=x0.dtype)
    ab = sched.alpha_bar[17]
    expected = np.sqrt(ab) * x0 + np.sqrt(1 - ab) * eps

    assert torch.equal(eps_target, eps)
    assert torch.equal(x_t, expected)
    # and the stream position is identical afterwards
    follow_a = torch.randn(5, generator=rng)
    follow_b = torch.randn(5, generator=rng_ref)
    assert torch.equal(follow_a, follow_b)


def test_alpha_bar_one_returns_x0():
    sched = NoiseSchedule(num_steps=3, alpha_bar=np.array([1.0, 0.5, 0.2]))
    x0 = torch.randn(3, 6, 6, generator=torch.Generator().manual_seed(0))
    x_t, _ = add_noise_with_offset(
        x0, 0, sched, 0.7, torch.Generator().manual_seed(1)
    )
    assert torch.allclose(x_t, x0, atol=1e-7)


def test_channel_mean_variance_matches_formula():
    """Monte-Carlo oracle: Var[channel mean of normalized noise] = offset^2 + 1/(H*W)."""
    offset = 0.1
    h = w = 8
    n = 10_000
    sched = cosine_schedule(100)
    t = 60
    ab = sched.alpha_bar[t]

    x0 = torch.zeros(n, 3, h, w)
    rng = torch.Generator().manual_seed(123)
    x_t, _ = add_noise_with_offset(x0, t, sched, offset, rng)

    normalized = (x_t - np.sqrt(ab) * x0) / np.sqrt(1 - ab)
    channel_means = normalized.mean(dim=(2, 3)).numpy().ravel()

    expected_var = offset**2 + 1.0 / (h * w)
    sample_var = channel_means.var(ddof=1)
    stderr = expected_var * np.sqrt(2.0 / (len(channel_means) - 1))
    assert abs(sample_var - expected_var) < 3 * stderr


def test_mean_preserved_for_any_offset():
    """E[x_t | x0] = sqrt(alpha_bar)*x0 regardless of offset."""
    sched = cosine_schedule(50)
    t = 25
    ab = sched.alpha_bar[t]
    n = 20_000
    x0 = torch.full((n, 2, 4, 4), 1.5)
    rng = torch.Generator().manual_seed(9)

    x_t, _ = add_noise_with_offset(x0, t, sched, 0.3, rng)
    mean = x_t.mean().item()

    expected = np.sqrt(ab) * 1.5
    # overall-mean variance: (1-ab) * (1/(n*2*16) + offset^2/(n*2))
    var = (1 - ab) * (1.0 / (n * 2 * 16) + 0.3**2 / (n * 2))
    assert abs(mean - expected) < 3 * np.sqrt(var)


def test_per_sample_t_and_broadcasting():
    sched = cosine_schedule(20)
    x0 = torch.randn(5, 4, 6, 6, generator=torch.Generator().manual_seed(2))
    t = torch.tensor([0, 3, 7, 12, 19])
    x_t, eps_target = add_noise_with_offset(
        x0, t, sched, 0.05, torch.Generator().manual_seed(5)
    )
    assert x_t.shape == x0.shape
    assert eps_target.shape == x0.shape


def test_eps_target_includes_channel_component():
    """With a huge offset the per-channel means of eps_target dominate."""
    sched = cosine_schedule(10)
    x0 = torch.zeros(64, 3, 16, 16)
    _, eps_target = add_noise_with_offset(
        x0, 5, sched, 10.0, torch.Generator().manual_seed(0)
    )
    per_channel = eps_target.mean(dim=(2, 3))
    # var of channel means ~ 100 + 1/256, i.e. std ~ 10; plain noise would be ~1/16
    assert per_channel.abs().mean() > 1.0


def test_rejects_bad_inputs():
    sched = cosine_schedule(10)
    x0 = torch.zeros(3, 4, 4)
    rng = torch.Generator()
    with pytest.raises(ValueError, match="out of range"):
        add_noise_with_offset(x0, 10, sched, 0.0, rng)
    with pytest.raises(ValueError, match="out of range"):
        add_noise_with_offset(x0, -1, sched, 0.0, rng)
    with pytest.raises(ValueError, match="nonnegative"):
        add_noise_with_offset(x0, 0, sched, -0.5, rng)
    with pytest.raises(ValueError, match="shape"):
        add_noise_with_offset(torch.zeros(4, 4), 0, sched, 0.0, rng)
