"""Text conditioning providers.

Two embedding slots feed the denoiser's cross-attention: slot A mimics a
contrastive image-text encoder (short sequence, small dim) and slot B a large
language-model encoder (longer sequence, wider dim).  The default provider is
a deterministic hashed bag-of-tokens embedding so nothing heavyweight is
downloaded; anything exposing ``embed``/``dim``/``max_tokens`` can be swapped
in.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class HashedTextEmbedder:
    """Deterministic per-token embeddings derived from a cryptographic hash.

    Each token's vector is seeded from ``blake2b(salt || token)``, so the
    mapping is stable across processes and platforms.  Output is a fixed
    ``[max_tokens, dim]`` array, zero-padded; the empty string embeds to all
    zeros, which doubles as the unconditional input for guidance.
    """

    def __init__(self, dim: int, salt: str, max_tokens: int = 8):
        if dim < 1 or max_tokens < 1:
            raise ValueError("dim and max_tokens must be positive")
        self.dim = dim
        self.salt = salt
        self.max_tokens = max_tokens
        self._cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            digest = hashlib.blake2b(
                f"{self.salt}|{token}".encode(), digest_size=8
            ).digest()
            seed = int.from_bytes(digest, "big")
            vec = np.random.default_rng(seed).standard_normal(self.dim)
            vec = (vec / np.sqrt(self.dim)).astype(np.float32)
            self._cache[token] = vec
        return vec

    def embed(self, text: str) -> np.ndarray:
        """Embed one string to ``[max_tokens, dim]`` float32."""
        out = np.zeros((self.max_tokens, self.dim), dtype=np.float32)
        tokens = _TOKEN_RE.findall(text.lower())[: self.max_tokens]
        for i, tok in enumerate(tokens):
            out[i] = self._token_vector(tok)
        return out

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        return np.stack([self.embed(t) for t in texts], axis=0)


def default_conditioners(
    cond_dim_a: int, cond_dim_b: int
) -> tuple[HashedTextEmbedder, HashedTextEmbedder]:
    """The standard slot-A / slot-B pair used by the CLIs and trainers."""
    slot_a = HashedTextEmbedder(cond_dim_a, salt="slot-a", max_tokens=8)
    slot_b = HashedTextEmbedder(cond_dim_b, salt="slot-b", max_tokens=16)
    return slot_a, slot_b
