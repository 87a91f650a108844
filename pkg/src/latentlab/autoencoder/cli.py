"""Command-line entry points: train-ae, ae-metrics."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import yaml

from latentlab.autoencoder.config import AEConfig
from latentlab.autoencoder.metrics import compute_recon_metrics
from latentlab.autoencoder.model import Autoencoder
from latentlab.autoencoder.train import reconstruct, train_ae
from latentlab.data.images import load_manifest_images


def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return yaml.safe_load(fh) or {}


def main_train_ae(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="train-ae", description="Train an image autoencoder")
    parser.add_argument("--config", required=True, help="YAML with AEConfig fields (+ optional data/batch_size/learning_rate)")
    parser.add_argument("--steps", type=int, required=True)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--out", required=True, help="checkpoint output path")
    parser.add_argument("--data", help="image manifest (overrides config data key)")
    args = parser.parse_args(argv)

    raw = _load_config(args.config)
    data_path = args.data or raw.pop("data", None)
    if data_path is None:
        parser.error("no dataset: pass --data or set a data key in the config")
    batch_size = raw.pop("batch_size", 32)
    learning_rate = raw.pop("learning_rate", 2e-3)
    config = AEConfig.from_dict(raw)

    images, _ = load_manifest_images(data_path)
    model, history = train_ae(
        images,
        config,
        steps=args.steps,
        seed=args.seed,
        batch_size=batch_size,
        learning_rate=learning_rate,
    )
    model.save(args.out, step=args.steps)
    print(f"trained {args.steps} steps; final recon loss {history['recon'][-1]:.6f}")
    print(f"checkpoint written to {args.out}")
    return 0


def main_ae_metrics(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ae-metrics", description="Reconstruction metrics for a trained autoencoder")
    parser.add_argument("--ckpt", required=True)
    parser.add_argument("--data", required=True, help="image manifest")
    parser.add_argument("--report", required=True, help="output JSON path")
    args = parser.parse_args(argv)

    model = Autoencoder.load(args.ckpt)
    images, _ = load_manifest_images(args.data)
    recon = reconstruct(model, images)
    metrics = compute_recon_metrics(images, recon)

    report = metrics.to_dict()
    report["n_images"] = len(images)
    report["config"] = model.config.to_dict()
    Path(args.report).parent.mkdir(parents=True, exist_ok=True)
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    print(f"ssim={report['ssim']:.4f} psnr={report['psnr']} fid={report['fid']:.4f}")
    return 0
