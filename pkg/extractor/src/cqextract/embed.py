"""Sentence embedding backends.

Two implementations behind one call:

* ``st``     -- a pretrained sentence-transformer (needs model weights on
               disk or a network connection to fetch them);
* ``hashed`` -- an offline, fully deterministic token/character-trigram
               hashing encoder. No semantics beyond lexical overlap, but
               identical inputs give bit-identical vectors on any machine.

``auto`` tries the transformer and falls back to hashing. Vectors are
emitted unnormalized; the consuming toolkit normalizes at load time.
"""

from __future__ import annotations

import hashlib
import math
import re

import numpy as np

_WORD = re.compile(r"[a-z0-9]+")


class HashedEncoder:
    def __init__(self, dim: int = 384):
        if dim < 8:
            raise ValueError(f"dim too small: {dim}")
        self.dim = dim

    def _features(self, text: str) -> list[str]:
        tokens = _WORD.findall(text.lower())
        feats = list(tokens)
        for token in tokens:
            padded = f"#{token}#"
            feats.extend(padded[i:i + 3] for i in range(len(padded) - 2))
        return feats

    def encode(self, text: str) -> np.ndarray:
        feats = self._features(text)
        vec = np.zeros(self.dim, dtype=np.float64)
        if not feats:
            vec[0] = 1.0
            return vec
        scale = 1.0 / math.sqrt(len(feats))
        for feat in feats:
            digest = hashlib.blake2b(feat.encode("utf-8"), digest_size=8).digest()
            index = int.from_bytes(digest[:4], "little") % self.dim
            sign = 1.0 if digest[4] & 1 else -1.0
            vec[index] += sign * scale
        return vec

    def encode_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [self.encode(t) for t in texts]


class SentenceTransformerEncoder:
    def __init__(self, model_name: str, dim: int):
        from sentence_transformers import SentenceTransformer  # heavyweight import
        self.model = SentenceTransformer(model_name)
        self.dim = dim

    def encode_batch(self, texts: list[str]) -> list[np.ndarray]:
        out = self.model.encode(texts, normalize_embeddings=False,
                                show_progress_bar=False)
        return [np.asarray(row, dtype=np.float64) for row in out]


def build_encoder(backend: str, model_name: str, dim: int):
    """Resolve the configured backend, falling back under ``auto``."""
    if backend == "hashed":
        return HashedEncoder(dim), "hashed"
    if backend == "st":
        return SentenceTransformerEncoder(model_name, dim), "st"
    if backend == "auto":
        try:
            return SentenceTransformerEncoder(model_name, dim), "st"
        except Exception:
            return HashedEncoder(dim), "hashed"
    raise ValueError(f"unknown embedding backend: {backend}")
