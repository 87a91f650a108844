"""Image and manifest IO.

Pixel convention: images are float32 arrays of shape ``[3, H, W]`` with
values in ``[-1, 1]``. Conversion to/from 8-bit happens only at the file
boundary (PNG read/write).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from PIL import Image


def to_uint8(image: np.ndarray) -> np.ndarray:
    """[3,H,W] in [-1,1] -> [H,W,3] uint8."""
    arr = np.clip((np.asarray(image) + 1.0) * 127.5, 0.0, 255.0)
    return arr.transpose(1, 2, 0).round().astype(np.uint8)


def from_uint8(arr: np.ndarray) -> np.ndarray:
    """[H,W,3] uint8 -> [3,H,W] float32 in [-1,1]."""
    img = arr.astype(np.float32).transpose(2, 0, 1) / 127.5 - 1.0
    return img.astype(np.float32)


def save_image(image: np.ndarray, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(to_uint8(image)).save(path, format="PNG")
    return path


def load_image(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"))
    return from_uint8(arr)


def resize_image(image: np.ndarray, target: int | tuple[int, int]) -> np.ndarray:
    """Deterministic bicubic resize to ``target`` (H, W) or a square side;
    no-op if already at the target size."""
    if isinstance(target, (int, np.integer)):
        target = (target, target)
    h, w = int(target[0]), int(target[1])
    if image.shape[1:] == (h, w):
        return image
    if not np.all(np.isfinite(image)):
        raise ValueError("corrupt image data: non-finite pixels")
    pil = Image.fromarray(to_uint8(image))
    resized = pil.resize((w, h), Image.BICUBIC)
    return from_uint8(np.asarray(resized))


@dataclass
class ImageManifestEntry:
    """One line of an image manifest (training data for the model trainers)."""

    id: str
    uri: str
    caption: str = ""
    concept: str = "other"
    width: int = 0
    height: int = 0


def write_image_manifest(
    entries: list[ImageManifestEntry], path: str | Path
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(asdict(entry), sort_keys=True) + "\n")
    return path


def read_image_manifest(path: str | Path) -> list[ImageManifestEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            entries.append(ImageManifestEntry(**json.loads(line)))
    return entries


def write_image_dataset(
    images: np.ndarray,
    captions: list[str],
    concepts: list[str],
    out_dir: str | Path,
) -> Path:
    """Write PNGs plus a manifest.jsonl; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, image in enumerate(images):
        name = f"img_{i:06d}.png"
        save_image(image, out_dir / name)
        entries.append(
            ImageManifestEntry(
                id=f"img_{i:06d}",
                uri=name,
                caption=captions[i],
                concept=concepts[i],
                width=image.shape[2],
                height=image.shape[1],
            )
        )
    return write_image_manifest(entries, out_dir / "manifest.jsonl")


def load_manifest_images(manifest_path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Load all images referenced by a manifest (uris resolved relative to it).

    Returns (images [N,3,H,W], captions).
    """
    manifest_path = Path(manifest_path)
    entries = read_image_manifest(manifest_path)
    if not entries:
        raise ValueError(f"empty image manifest: {manifest_path}")
    base = manifest_path.parent
    images = np.stack([load_image(base / e.uri) for e in entries])
    return images, [e.caption for e in entries]
