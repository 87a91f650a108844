"""The backbone interface quality-tuning trains against.

Any generative model exposing these four capabilities is tunable — the
trainer never peeks inside.  A batch is ``(images, captions)`` with images as
float32 ``[B, 3, H, W]`` in [-1, 1] and captions as a list of strings.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

Batch = tuple[np.ndarray, list[str]]


@runtime_checkable
class QTuneBackbone(Protocol):
    def train_step(self, batch: Batch, noise_offset: float) -> float:
        """One optimizer update; returns the scalar training loss."""
        ...

    def sample(self, prompt: str, seed: int) -> np.ndarray:
        """Generate one image [3, H, W] in [-1, 1]; deterministic given seed."""
        ...

    def save(self, path: str | Path) -> Path:
        ...

    def load(self, path: str | Path) -> None:
        """Restore weights previously written by `save`."""
        ...


class ConformanceError(RuntimeError):
    """A backbone failed the interface conformance checks."""


def check_backbone(backbone, sample_batch: Batch | None = None,
                   tmp_dir: str | Path | None = None) -> None:
    """Verify the backbone honors the interface; raises ConformanceError.

    Structural checks always run; behavioral checks (finite loss, image
    shape, save/load round trip) run when a sample batch / scratch dir is
    provided.
    """
    for name in ("train_step", "sample", "save", "load"):
        if not callable(getattr(backbone, name, None)):
            raise ConformanceError(f"backbone lacks required method {name!r}")

    if sample_batch is not None:
        images, captions = sample_batch
        loss = backbone.train_step((images, captions), 0.0)
        if not isinstance(loss, float) or not np.isfinite(loss):
            raise ConformanceError(f"train_step returned non-finite loss: {loss!r}")
        image = backbone.sample(captions[0] if captions else "", seed=0)
        if not isinstance(image, np.ndarray) or image.ndim != 3 or image.shape[0] != 3:
            raise ConformanceError(
                f"sample must return a [3, H, W] array, got "
                f"{type(image).__name__} {getattr(image, 'shape', None)}"
            )
        again = backbone.sample(captions[0] if captions else "", seed=0)
        if not np.array_equal(image, again):
            raise ConformanceError("sample is not deterministic for a fixed seed")

    if tmp_dir is not None:
        path = Path(tmp_dir) / "conformance.ckpt"
        backbone.save(path)
        backbone.load(path)
        if sample_batch is not None:
            captions = sample_batch[1]
            before = backbone.sample(captions[0] if captions else "", seed=1)
            backbone.load(path)
            after = backbone.sample(captions[0] if captions else "", seed=1)
            if not np.array_equal(before, after):
                raise ConformanceError("save/load round trip changed the weights")
