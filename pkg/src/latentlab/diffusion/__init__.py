"""Latent diffusion core: schedules, offset noising, denoiser, trainer, sampler."""

from .conditioning import HashedTextEmbedder, default_conditioners
from .denoiser import Denoiser, DenoiserConfig, analytic_param_count
from .noising import add_noise_with_offset
from .sampler import sample
from .schedule import NoiseSchedule, cosine_schedule, linear_schedule
from .train import TextCond, TrainConfig, pretrain, train_step

__all__ = [
    "Denoiser",
    "DenoiserConfig",
    "HashedTextEmbedder",
    "NoiseSchedule",
    "TextCond",
    "TrainConfig",
    "add_noise_with_offset",
    "analytic_param_count",
    "cosine_schedule",
    "default_conditioners",
    "linear_schedule",
    "pretrain",
    "sample",
    "train_step",
]
