"""Single-file checkpoint archive: config echo + weights + step count.

Checkpoints are pickled dicts of numpy arrays rather than ``torch.save``
archives so that two runs with identical seeds produce byte-identical
files (no zip timestamps, no opaque storage layout).
"""

from __future__ import annotations

import pickle
from pathlib import Path
from typing import Any

import numpy as np
import torch

_PROTOCOL = 4  # pinned so checkpoint bytes stay stable across interpreter versions


def state_dict_to_numpy(module: torch.nn.Module) -> dict[str, np.ndarray]:
    return {k: v.detach().cpu().numpy().copy() for k, v in module.state_dict().items()}


def load_numpy_state(module: torch.nn.Module, state: dict[str, np.ndarray]) -> None:
    tensors = {k: torch.from_numpy(np.asarray(v)) for k, v in state.items()}
    module.load_state_dict(tensors)


def save_checkpoint(
    path: str | Path,
    *,
    kind: str,
    config: dict[str, Any],
    state: dict[str, np.ndarray],
    step: int,
    extra: dict[str, Any] | None = None,
) -> Path:
    """Write a checkpoint file; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "kind": kind,
        "config": config,
        "state": state,
        "step": int(step),
        "extra": extra or {},
    }
    with open(path, "wb") as fh:
        pickle.dump(payload, fh, protocol=_PROTOCOL)
    return path


def load_checkpoint(path: str | Path, *, expect_kind: str | None = None) -> dict[str, Any]:
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    if expect_kind is not None and payload.get("kind") != expect_kind:
        raise ValueError(
            f"checkpoint kind mismatch: expected {expect_kind!r}, got {payload.get('kind')!r}"
        )
    return payload
