from latentlab.autoencoder.config import AEConfig
from latentlab.autoencoder.fourier import fourier_lift
from latentlab.autoencoder.metrics import (
    ConvFeatureExtractor,
    ReconMetrics,
    compute_recon_metrics,
    frechet_distance,
    psnr,
    ssim,
)
from latentlab.autoencoder.model import Autoencoder, LatentTensor
from latentlab.autoencoder.train import train_ae

__all__ = [
    "AEConfig",
    "Autoencoder",
    "ConvFeatureExtractor",
    "LatentTensor",
    "ReconMetrics",
    "compute_recon_metrics",
    "fourier_lift",
    "frechet_distance",
    "psnr",
    "ssim",
    "train_ae",
]
