"""Reconstruction metric trio: SSIM, PSNR, FID.

SSIM uses the standard windowed definition (scikit-image). PSNR is computed
directly so that identical images yield an explicit infinity sentinel rather
than a float overflow. FID is the Frechet distance between Gaussian fits of
features from a pluggable extractor; the default extractor is a small
fixed-weight conv net shipped with the repo, so FID values are comparable
only within this repo.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
import scipy.linalg
import torch
from skimage.metrics import structural_similarity
from torch import nn

logger = logging.getLogger(__name__)

PIXEL_RANGE = 2.0  # images live in [-1, 1]

FeatureExtractor = Callable[[np.ndarray], np.ndarray]


@dataclass
class ReconMetrics:
    ssim: float
    psnr: float  # dB; math.inf when every pair is identical
    fid: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "ssim": self.ssim,
            "psnr": "inf" if math.isinf(self.psnr) else self.psnr,
            "fid": self.fid,
        }


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """SSIM between two [3,H,W] images in [-1,1]."""
    return float(
        structural_similarity(
            np.asarray(a, dtype=np.float64),
            np.asarray(b, dtype=np.float64),
            channel_axis=0,
            data_range=PIXEL_RANGE,
        )
    )


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """PSNR in dB; math.inf for identical images."""
    mse = float(np.mean((np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PIXEL_RANGE**2 / mse)


def frechet_distance(
    mu1: np.ndarray, cov1: np.ndarray, mu2: np.ndarray, cov2: np.ndarray
) -> float:
    """||mu1-mu2||^2 + tr(C1 + C2 - 2 sqrt(C1 C2)), regularizing if singular."""
    diff = mu1 - mu2
    covmean, _ = scipy.linalg.sqrtm(cov1 @ cov2, disp=False)
    if not np.isfinite(covmean).all():
        eps = 1e-6
        logger.warning("singular covariance product in FID; regularizing with eps=%g", eps)
        offset = eps * np.eye(cov1.shape[0])
        covmean, _ = scipy.linalg.sqrtm((cov1 + offset) @ (cov2 + offset), disp=False)
    if np.iscomplexobj(covmean):
        covmean = covmean.real
    value = float(diff @ diff + np.trace(cov1) + np.trace(cov2) - 2.0 * np.trace(covmean))
    return max(value, 0.0)


class ConvFeatureExtractor:
    """Fixed-weight conv features for FID (mean+std pooled, 128-dim).

    Weights are drawn from a pinned generator seed, so features are stable
    across runs and machines.
    """

    def __init__(self, seed: int = 0x5EED):
        gen = torch.Generator().manual_seed(seed)
        self.net = nn.Sequential(
            nn.Conv2d(3, 16, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(16, 32, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(32, 64, 3, padding=1),
        )
        with torch.no_grad():
            for p in self.net.parameters():
                fan_in = p.shape[1] * p.shape[2] * p.shape[3] if p.ndim == 4 else p.shape[0]
                p.copy_(torch.randn(p.shape, generator=gen) * math.sqrt(2.0 / fan_in))
        self.net.eval()

    @torch.no_grad()
    def __call__(self, images: np.ndarray) -> np.ndarray:
        x = torch.from_numpy(np.asarray(images, dtype=np.float32))
        feats = self.net(x)
        pooled = torch.cat([feats.mean(dim=(2, 3)), feats.std(dim=(2, 3))], dim=1)
        return pooled.numpy().astype(np.float64)


def fid_from_features(feats1: np.ndarray, feats2: np.ndarray) -> float:
    mu1, mu2 = feats1.mean(axis=0), feats2.mean(axis=0)
    cov1 = np.cov(feats1, rowvar=False)
    cov2 = np.cov(feats2, rowvar=False)
    return frechet_distance(mu1, cov1, mu2, cov2)


def compute_recon_metrics(
    originals: np.ndarray,
    reconstructions: np.ndarray,
    feature_extractor: FeatureExtractor | None = None,
) -> ReconMetrics:
    """Average SSIM/PSNR over pairs plus FID between the two sets.

    Requires equal-length paired sets with at least 2 images (FID needs a
    covariance estimate).
    """
    originals = np.asarray(originals)
    reconstructions = np.asarray(reconstructions)
    if len(originals) != len(reconstructions):
        raise ValueError(
            f"paired sets must have equal length, got {len(originals)} vs "
            f"{len(reconstructions)}"
        )
    if len(originals) < 2:
        raise ValueError("need at least 2 image pairs for FID")
    if feature_extractor is None:
        feature_extractor = ConvFeatureExtractor()

    ssim_vals = [ssim(a, b) for a, b in zip(originals, reconstructions)]
    psnr_vals = [psnr(a, b) for a, b in zip(originals, reconstructions)]
    mean_psnr = math.inf if any(math.isinf(v) for v in psnr_vals) else float(np.mean(psnr_vals))

    fid = fid_from_features(feature_extractor(originals), feature_extractor(reconstructions))
    return ReconMetrics(ssim=float(np.mean(ssim_vals)), psnr=mean_psnr, fid=fid)
