"""Command-line entry point: `quality-tune`."""

from __future__ import annotations

import argparse
from pathlib import Path

import yaml

from ..checkpoint import load_checkpoint
from .backbones import DiffusionBackbone
from .config import QTuneConfig
from .trainer import quality_tune


def main_quality_tune(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quality-tune",
        description="Fine-tune a pre-trained backbone on a small curated set.",
    )
    parser.add_argument("--ckpt", required=True, help="pre-trained checkpoint")
    parser.add_argument("--data", required=True, help="quality set manifest (JSONL)")
    parser.add_argument("--config", required=True, help="YAML tuning config")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    raw = yaml.safe_load(Path(args.config).read_text()) or {}
    ae_ckpt = raw.pop("ae_ckpt", None)
    sample_steps = int(raw.pop("sample_steps", 20))
    config = QTuneConfig.from_dict(raw)

    kind = load_checkpoint(args.ckpt)["kind"]
    if kind == "denoiser":
        backbone = DiffusionBackbone.from_pretrained_denoiser(
            args.ckpt,
            ae_ckpt=ae_ckpt,
            learning_rate=config.learning_rate,
            seed=config.seed,
            sample_steps=sample_steps,
        )
    elif kind == "qtune-backbone":
        backbone = DiffusionBackbone.restore(
            args.ckpt, learning_rate=config.learning_rate, seed=config.seed
        )
    else:
        parser.error(f"unsupported checkpoint kind {kind!r}")

    ckpt_path, report = quality_tune(backbone, args.data, config, args.out)
    print(
        f"wrote {ckpt_path} after {report['steps_run']} steps "
        f"(stop: {report['stop_reason']})"
    )
    return 0
