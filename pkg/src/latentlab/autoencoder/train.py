"""Autoencoder training loop (reconstruction + KL, optional adversarial term)."""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F

from latentlab.autoencoder.config import AEConfig
from latentlab.autoencoder.model import Autoencoder, PatchDiscriminator


def train_ae(
    images: np.ndarray,
    config: AEConfig,
    steps: int,
    seed: int,
    batch_size: int = 32,
    learning_rate: float = 2e-3,
    adv_warmup_frac: float = 0.5,
) -> tuple[Autoencoder, dict[str, list[float]]]:
    """Train an autoencoder on [N,3,H,W] images in [-1,1].

    Returns the trained model and a per-step loss log with keys "recon",
    "kl" and "total" (plus "gen_adv" and "disc" when the adversarial loss is
    enabled). The discriminator only starts updating after
    ``adv_warmup_frac * steps`` warm-up steps.
    """
    if len(images) == 0:
        raise ValueError("empty dataset")
    if steps < 1:
        raise ValueError("steps must be >= 1")

    torch.manual_seed(seed)
    model = Autoencoder(config)
    opt = torch.optim.Adam(model.parameters(), lr=learning_rate)

    disc = disc_opt = None
    warmup = int(steps * adv_warmup_frac)
    if config.use_adversarial_loss:
        disc = PatchDiscriminator(base_width=config.base_width)
        disc_opt = torch.optim.Adam(disc.parameters(), lr=learning_rate)

    rng = np.random.default_rng(seed)
    data = torch.from_numpy(np.asarray(images, dtype=np.float32))
    history: dict[str, list[float]] = {"recon": [], "kl": [], "total": []}
    if config.use_adversarial_loss:
        history["gen_adv"] = []
        history["disc"] = []

    for step in range(steps):
        idx = rng.integers(0, len(data), size=min(batch_size, len(data)))
        batch = data[torch.from_numpy(idx)]

        mean, logvar = model.encode_moments(batch)
        z = mean + torch.exp(0.5 * logvar) * torch.randn_like(mean)
        recon = model.decode_batch(z, clamp=False)

        recon_loss = F.mse_loss(recon, batch)
        kl = -0.5 * torch.mean(1 + logvar - mean.pow(2) - logvar.exp())
        loss = config.recon_loss_weight * recon_loss + config.kl_or_reg_weight * kl

        adv_active = disc is not None and step >= warmup
        if adv_active:
            gen_adv = -disc(recon).mean()
            loss = loss + config.adv_loss_weight * gen_adv
            history["gen_adv"].append(gen_adv.item())
        elif disc is not None:
            history["gen_adv"].append(0.0)

        if not torch.isfinite(loss):
            raise RuntimeError(
                f"non-finite loss at step {step}: recon={float(recon_loss)!r} "
                f"kl={float(kl)!r}; aborting"
            )

        opt.zero_grad()
        loss.backward()
        opt.step()

        if disc is not None and disc_opt is not None:
            if adv_active:
                d_real = disc(batch)
                d_fake = disc(recon.detach())
                d_loss = F.relu(1.0 - d_real).mean() + F.relu(1.0 + d_fake).mean()
                disc_opt.zero_grad()
                d_loss.backward()
                disc_opt.step()
                history["disc"].append(d_loss.item())
            else:
                history["disc"].append(0.0)

        history["recon"].append(recon_loss.item())
        history["kl"].append(kl.item())
        history["total"].append(loss.item())

    return model, history


def reconstruct(model: Autoencoder, images: np.ndarray, batch_size: int = 64) -> np.ndarray:
    """Deterministic encode-decode round trip for an image set."""
    model.eval()
    out = []
    with torch.no_grad():
        for start in range(0, len(images), batch_size):
            batch = torch.from_numpy(
                np.asarray(images[start : start + batch_size], dtype=np.float32)
            )
            out.append(model.decode_batch(model.encode_batch(batch)).numpy())
    return np.concatenate(out)


def run_channel_ablation(
    train_images: np.ndarray,
    eval_images: np.ndarray,
    latent_channels: list[int],
    steps: int,
    seed: int,
    base_config: AEConfig | None = None,
    **train_kwargs,
):
    """Train one AE per latent channel count and collect eval metrics."""
    from latentlab.autoencoder.metrics import ConvFeatureExtractor, compute_recon_metrics

    extractor = ConvFeatureExtractor()
    results = {}
    for channels in latent_channels:
        cfg_fields = base_config.to_dict() if base_config else {}
        cfg_fields["latent_channels"] = channels
        cfg = AEConfig.from_dict(cfg_fields)
        model, _ = train_ae(train_images, cfg, steps=steps, seed=seed, **train_kwargs)
        recon = reconstruct(model, eval_images)
        results[channels] = compute_recon_metrics(eval_images, recon, extractor)
    return results
