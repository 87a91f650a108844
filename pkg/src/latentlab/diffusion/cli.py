"""Command-line entry points: `pretrain` and `sample`."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import torch
import yaml

from ..autoencoder.model import Autoencoder
from ..checkpoint import load_checkpoint, load_numpy_state
from ..data.images import load_manifest_images, save_image
from .conditioning import default_conditioners
from .denoiser import Denoiser, DenoiserConfig
from .sampler import sample
from .schedule import cosine_schedule
from .train import TrainConfig, pretrain

_TRAIN_KEYS = (
    "resolutions",
    "noise_offset",
    "batch_size",
    "learning_rate",
    "seed",
    "text_cond",
    "cond_dropout_prob",
)


def main_pretrain(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pretrain",
        description="Progressive-resolution denoiser pre-training.",
    )
    parser.add_argument("--config", required=True, help="YAML train config")
    parser.add_argument("--data", required=True, help="image manifest (JSONL)")
    parser.add_argument("--out-dir", required=True)
    args = parser.parse_args(argv)

    raw = yaml.safe_load(Path(args.config).read_text())
    config = TrainConfig.from_dict({k: raw[k] for k in _TRAIN_KEYS if k in raw})

    ae_ckpt = raw.get("ae_ckpt")
    if not ae_ckpt:
        parser.error("config must set ae_ckpt (autoencoder checkpoint path)")
    autoencoder = Autoencoder.load(ae_ckpt)

    den_cfg = DenoiserConfig.from_dict(
        {**raw.get("denoiser", {}), "in_channels": autoencoder.config.latent_channels}
    )
    model = Denoiser.create(den_cfg, seed=config.seed)

    images, captions = load_manifest_images(args.data)
    schedule = cosine_schedule(int(raw.get("schedule_steps", 1000)))
    paths, history = pretrain(
        model,
        autoencoder,
        images,
        captions,
        config,
        args.out_dir,
        schedule=schedule,
        extra_meta={"ae_ckpt": str(Path(ae_ckpt).resolve())},
    )

    log_path = Path(args.out_dir) / "train_log.json"
    log_path.write_text(json.dumps(history, indent=2, sort_keys=True))
    print(f"wrote {len(paths)} checkpoints; final: {paths[-1]}")
    return 0


def main_sample(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sample",
        description="Draw an image from a pre-trained denoiser checkpoint.",
    )
    parser.add_argument("--ckpt", required=True)
    parser.add_argument("--prompt", required=True)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--guidance", type=float, default=1.0)
    parser.add_argument("--ae-ckpt", help="override autoencoder checkpoint path")
    args = parser.parse_args(argv)

    payload = load_checkpoint(args.ckpt, expect_kind="denoiser")
    den_cfg = DenoiserConfig.from_dict(payload["config"])
    model = Denoiser(den_cfg)
    load_numpy_state(model, payload["state"])

    ae_path = args.ae_ckpt or payload["extra"].get("ae_ckpt")
    if not ae_path:
        parser.error("checkpoint has no recorded ae_ckpt; pass --ae-ckpt")
    autoencoder = Autoencoder.load(ae_path)

    resolution = int(payload["extra"]["stage_resolution"])
    latent_hw = resolution // autoencoder.config.spatial_divisor
    schedule = cosine_schedule(int(payload["extra"].get("schedule_num_steps", 1000)))

    slot_a, slot_b = default_conditioners(den_cfg.cond_dim_a, den_cfg.cond_dim_b)
    cond_a = torch.from_numpy(slot_a.embed(args.prompt))
    cond_b = torch.from_numpy(slot_b.embed(args.prompt))

    latent = sample(
        model,
        schedule,
        cond_a,
        cond_b,
        (latent_hw, latent_hw),
        steps=args.steps,
        guidance_scale=args.guidance,
        seed=args.seed,
    )
    with torch.no_grad():
        image = autoencoder.decode_batch(latent[None], clamp=True)[0].numpy()
    save_image(image, args.out)
    print(f"wrote {args.out}")
    return 0
