"""Deterministic synthetic toy datasets.

Three families:
  * texture/shape images -- high-frequency content so small autoencoders are
    capacity-limited (drives the latent-channel ablation),
  * captioned shape images -- for text-conditioned diffusion toys,
  * contrast-controlled smooth fields -- for the quality-tuning
    distribution-shift experiment.
"""

from __future__ import annotations

import numpy as np

_COLORS = {
    "red": (1.0, -0.6, -0.6),
    "green": (-0.6, 1.0, -0.6),
    "blue": (-0.6, -0.6, 1.0),
    "yellow": (1.0, 1.0, -0.6),
    "white": (0.9, 0.9, 0.9),
    "purple": (0.6, -0.6, 0.9),
}

_SHAPES = ("circle", "square", "cross")


def _grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    coords = (np.arange(resolution) + 0.5) / resolution
    return np.meshgrid(coords, coords, indexing="ij")


def _grating(rng: np.random.Generator, resolution: int) -> np.ndarray:
    yy, xx = _grid(resolution)
    freq = rng.uniform(2.0, resolution / 3.0)
    theta = rng.uniform(0.0, np.pi)
    phase = rng.uniform(0.0, 2 * np.pi)
    wave = np.sin(2 * np.pi * freq * (np.cos(theta) * xx + np.sin(theta) * yy) + phase)
    amps = rng.uniform(0.3, 1.0, size=3)
    return wave[None] * amps[:, None, None]


def _shape_mask(rng: np.random.Generator, resolution: int, shape: str) -> np.ndarray:
    yy, xx = _grid(resolution)
    cy, cx = rng.uniform(0.25, 0.75, size=2)
    r = rng.uniform(0.12, 0.3)
    if shape == "circle":
        return ((yy - cy) ** 2 + (xx - cx) ** 2) <= r**2
    if shape == "square":
        return (np.abs(yy - cy) <= r) & (np.abs(xx - cx) <= r)
    if shape == "cross":
        return (np.abs(yy - cy) <= r / 3) | (np.abs(xx - cx) <= r / 3)
    raise ValueError(f"unknown shape {shape!r}")


def texture_shape_images(n: int, resolution: int = 32, seed: int = 0) -> np.ndarray:
    """High-detail texture/shape images, [n,3,res,res] float32 in [-1,1]."""
    rng = np.random.default_rng(seed)
    images = np.zeros((n, 3, resolution, resolution), dtype=np.float32)
    for i in range(n):
        img = 0.6 * _grating(rng, resolution) + 0.4 * _grating(rng, resolution)
        shape = _SHAPES[int(rng.integers(len(_SHAPES)))]
        mask = _shape_mask(rng, resolution, shape)
        color = np.array(list(_COLORS.values())[int(rng.integers(len(_COLORS)))])
        img = np.where(mask[None], 0.7 * color[:, None, None] + 0.3 * img, img)
        img += rng.normal(0.0, 0.05, size=img.shape)
        images[i] = np.clip(img, -1.0, 1.0)
    return images


def shape_dataset(
    n: int, resolution: int = 32, seed: int = 0
) -> tuple[np.ndarray, list[str], list[str]]:
    """Captioned shapes on gradient backgrounds.

    Returns (images [n,3,res,res], captions, concept labels).
    """
    rng = np.random.default_rng(seed)
    yy, xx = _grid(resolution)
    images = np.zeros((n, 3, resolution, resolution), dtype=np.float32)
    captions, concepts = [], []
    color_names = list(_COLORS)
    for i in range(n):
        g = rng.uniform(-0.5, 0.5, size=2)
        background = (g[0] * (xx - 0.5) + g[1] * (yy - 0.5))[None] * np.ones((3, 1, 1))
        shape = _SHAPES[int(rng.integers(len(_SHAPES)))]
        color_name = color_names[int(rng.integers(len(color_names)))]
        color = np.array(_COLORS[color_name])
        mask = _shape_mask(rng, resolution, shape)
        img = np.where(mask[None], color[:, None, None], background)
        images[i] = np.clip(img, -1.0, 1.0)
        captions.append(f"a {color_name} {shape}")
        concepts.append(shape)
    return images, captions, concepts


def contrast_field_images(
    n: int,
    resolution: int = 16,
    seed: int = 0,
    contrast_range: tuple[float, float] = (0.15, 1.0),
) -> tuple[np.ndarray, np.ndarray]:
    """Smooth random fields with controlled per-image contrast.

    Each image is a zero-mean low-frequency pattern normalized to max |pixel|
    of 1 and scaled by a contrast factor drawn uniformly from
    ``contrast_range`` (so no clipping occurs). Returns (images [n,3,res,res],
    measured per-image pixel std).
    """
    rng = np.random.default_rng(seed)
    yy, xx = _grid(resolution)
    images = np.zeros((n, 3, resolution, resolution), dtype=np.float32)
    contrasts = np.zeros(n, dtype=np.float32)
    for i in range(n):
        pattern = np.zeros((resolution, resolution))
        for _ in range(3):
            freq = rng.uniform(0.5, 2.0)
            theta = rng.uniform(0.0, np.pi)
            phase = rng.uniform(0.0, 2 * np.pi)
            pattern += rng.uniform(0.5, 1.0) * np.sin(
                2 * np.pi * freq * (np.cos(theta) * xx + np.sin(theta) * yy) + phase
            )
        pattern -= pattern.mean()
        pattern /= np.abs(pattern).max()
        c = rng.uniform(*contrast_range)
        img = np.repeat((c * pattern)[None], 3, axis=0)
        images[i] = img
        contrasts[i] = img.std()
    return images, contrasts


def image_contrast(images: np.ndarray) -> np.ndarray:
    """Per-image pixel standard deviation, shape [n]."""
    return np.asarray(images).reshape(len(images), -1).std(axis=1)
