"""Quality-tuning loop: tiny curated dataset, hard iteration cap, early stop.

The stopping proxy is a repo design decision: validation loss on a held-out
slice of the quality set (the backbone's `eval_loss` when it has one,
otherwise the trailing training-loss mean).  An eval "worsens" when
it fails to improve on the best value seen; `early_stop_patience` consecutive
worsening evals stop the run with reason "patience".  Hitting the iteration
cap stops with reason "cap" even if the loss is still decreasing.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..data.images import load_manifest_images, save_image
from .backbone import Batch, QTuneBackbone, check_backbone
from .config import QTuneConfig

_HOLDOUT_FRACTION = 0.1
_HOLDOUT_MAX = 64


def check_early_stop(
    step: int, eval_history: list[float], config: QTuneConfig
) -> str | None:
    """Stop decision given the proxy-metric history; None means continue.

    "patience" fires when the last `early_stop_patience` evals all failed to
    improve on the best value observed before them.
    """
    if step >= config.max_iterations:
        return "cap"
    patience = config.early_stop_patience
    if len(eval_history) > patience:
        best_before = min(eval_history[:-patience])
        if min(eval_history[-patience:]) >= best_before:
            return "patience"
    return None


def make_ablation_subsets(
    rows: list[dict], sizes: list[int], seed: int
) -> list[list[dict]]:
    """Seed-deterministic nested subsets: each smaller one ⊂ every larger one.

    Achieved by taking prefixes of a single seeded permutation; each subset is
    then ordered by id so it can be written as a clean manifest.
    """
    if sorted(sizes) != list(sizes):
        raise ValueError("sizes must be ascending")
    if sizes and sizes[-1] > len(rows):
        raise ValueError(
            f"largest subset size {sizes[-1]} exceeds dataset size {len(rows)}"
        )
    perm = np.random.default_rng(seed).permutation(len(rows))
    subsets = []
    for size in sizes:
        chosen = [rows[i] for i in perm[:size]]
        subsets.append(sorted(chosen, key=lambda r: r.get("id", "")))
    return subsets


def _render_sample_grid(
    backbone: QTuneBackbone, prompts: list[str], step: int, out_dir: Path
) -> Path:
    images = [backbone.sample(p, seed=i) for i, p in enumerate(prompts)]
    grid = np.concatenate(images, axis=2)  # side by side
    path = out_dir / f"samples_step_{step:06d}.png"
    save_image(grid, path)
    return path


def quality_tune(
    backbone: QTuneBackbone,
    quality_set: str | Path | list[dict],
    config: QTuneConfig,
    out_dir: str | Path,
) -> tuple[Path, dict]:
    """Fine-tune `backbone` on the quality set; returns (checkpoint, report).

    The report records steps_run, stop_reason ("cap" or "patience"), the
    subset size actually used, and the full loss curve.  Batches are drawn
    with replacement whenever the dataset is smaller than the batch size.
    """
    check_backbone(backbone)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    samples_dir = out_dir / "samples"
    samples_dir.mkdir(exist_ok=True)

    if isinstance(quality_set, (str, Path)):
        images, captions = load_manifest_images(quality_set)
    else:
        if not quality_set:
            raise ValueError("quality set is empty")
        manifest_rows = quality_set
        images, captions = _rows_to_arrays(manifest_rows)
    if len(images) == 0:
        raise ValueError("quality set is empty")

    rng = np.random.default_rng(config.seed)
    if config.subset_size is not None:
        if config.subset_size > len(images):
            raise ValueError(
                f"subset_size {config.subset_size} exceeds dataset size {len(images)}"
            )
        perm = rng.permutation(len(images))[: config.subset_size]
        perm.sort()
        images = images[perm]
        captions = [captions[i] for i in perm]

    n = len(images)
    holdout = min(_HOLDOUT_MAX, int(n * _HOLDOUT_FRACTION))
    if holdout >= 1:
        val_batch: Batch = (images[n - holdout :], captions[n - holdout :])
        train_images, train_captions = images[: n - holdout], captions[: n - holdout]
    else:
        val_batch = (images, captions)
        train_images, train_captions = images, captions
    n_train = len(train_images)

    if hasattr(backbone, "set_learning_rate"):
        backbone.set_learning_rate(config.learning_rate)

    losses: list[float] = []
    eval_steps: list[int] = []
    eval_values: list[float] = []
    grid_prompts = train_captions[: min(4, n_train)]
    stop_reason = "cap"
    step = 0

    while True:
        reason = check_early_stop(step, eval_values, config)
        if reason is not None:
            stop_reason = reason
            break

        if n_train < config.batch_size:
            idx = rng.integers(0, n_train, size=config.batch_size)
        else:
            idx = rng.choice(n_train, size=config.batch_size, replace=False)
        batch: Batch = (train_images[idx], [train_captions[i] for i in idx])
        losses.append(backbone.train_step(batch, config.noise_offset))
        step += 1

        if step % config.eval_every == 0:
            if hasattr(backbone, "eval_loss"):
                proxy = backbone.eval_loss(val_batch)
            else:
                proxy = float(np.mean(losses[-config.eval_every :]))
            eval_steps.append(step)
            eval_values.append(proxy)
            _render_sample_grid(backbone, grid_prompts, step, samples_dir)

    ckpt_path = backbone.save(out_dir / "tuned.ckpt")
    if step > 0 and (not eval_steps or eval_steps[-1] != step):
        _render_sample_grid(backbone, grid_prompts, step, samples_dir)

    report = {
        "steps_run": step,
        "stop_reason": stop_reason,
        "subset_size": config.subset_size if config.subset_size is not None else n,
        "dataset_size": n,
        "loss": losses,
        "eval": {"steps": eval_steps, "proxy": eval_values},
        "config": config.to_dict(),
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True)
    )
    return ckpt_path, report


def _rows_to_arrays(rows: list[dict]) -> tuple[np.ndarray, list[str]]:
    from ..data.images import load_image

    images = np.stack([load_image(row["uri"]) for row in rows])
    captions = [row.get("caption", "") for row in rows]
    return images, captions
