"""384-dim text embeddings behind a provider interface.

The default provider is a deterministic signed-feature-hashing embedder:
word unigrams, word bigrams, and character trigrams hashed with 64-bit
FNV-1a into 384 buckets (bucket = h mod 384, sign from bit 63), then
L2-normalized. Empty text maps to the all-zero sentinel vector.

An external sentence encoder can be plugged in with
`embedding.provider = "subprocess:<cmd>"` (see plugin.py).
"""

from __future__ import annotations

import re

import numpy as np

EMBEDDING_DIM = 384

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _features(text: str) -> list[str]:
    tokens = _TOKEN_RE.findall(text.lower())
    feats = list(tokens)
    feats.extend(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    joined = " ".join(tokens)
    feats.extend(joined[i : i + 3] for i in range(len(joined) - 2))
    return feats


class HashEmbedder:
    """Deterministic hashing embedder; pure function of the input bytes."""

    dim = EMBEDDING_DIM

    def embed_text(self, text: str) -> np.ndarray:
        vec = np.zeros(EMBEDDING_DIM)
        for feat in _features(text):
            h = fnv1a64(feat.encode("utf-8"))
            bucket = h % EMBEDDING_DIM
            sign = -1.0 if (h >> 63) & 1 else 1.0
            vec[bucket] += sign
        norm = np.linalg.norm(vec)
        if norm > 0.0:
            vec /= norm
        return vec

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [self.embed_text(t) for t in texts]


def get_embedder(provider: str = "hash"):
    """Resolve an embedding provider from its config key."""
    if provider == "hash":
        return HashEmbedder()
    if provider.startswith("subprocess:"):
        from .plugin import SubprocessEmbedder

        return SubprocessEmbedder(provider.split(":", 1)[1])
    raise ValueError(f"unknown embedding provider: {provider!r}")
