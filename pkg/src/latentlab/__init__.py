"""Desk-scale latent diffusion lab.

Subpackages:
    autoencoder  -- configurable image autoencoder family + reconstruction metrics
    diffusion    -- noise schedule, offset noising, toy denoiser, trainer, sampler
    curation     -- automatic filter cascade and two-stage human-filtering store
    qtune        -- backbone-agnostic quality-tuning trainer
    evalharness  -- paired human-preference evaluation harness
    data         -- synthetic toy datasets and manifest/image IO
"""

__version__ = "0.1.0"
