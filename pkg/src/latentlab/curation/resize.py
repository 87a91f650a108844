"""Resizing selected images to the training target resolution.

The reference pipeline upsampled to 1024px with a learned model; here a
deterministic bicubic resize stands in, at a toy default target.
"""

from __future__ import annotations

import numpy as np

from ..data.images import load_image, resize_image
from .records import ImageRecord

DEFAULT_TARGET = 64


def resize_to_target(record: ImageRecord, target: int = DEFAULT_TARGET) -> np.ndarray:
    """Load the record's image and return it at exactly `target` x `target`.

    A no-op (beyond decoding) when the stored image is already at the target.
    Raises ValueError on corrupt image data.
    """
    image = load_image(record.uri)
    return resize_image(image, target)
