"""Text embedding behind a provider interface.

The default provider is a deterministic local hashed n-gram embedder so that
every retrieval result is reproducible offline, bit for bit, across runs and
platforms. A remote provider slot exists for deployments with connectivity;
it is never required.
"""

from __future__ import annotations

import hashlib
import json
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .errors import DimensionMismatch, ProviderUnavailable

DEFAULT_DIMENSION = 256

_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class EmbedderSpec:
    """Identity of an embedding space. Segments persist this in their header;
    a store is only queryable with the embedder that built it."""

    provider: str = "local_hashed_ngram"
    dimension: int = DEFAULT_DIMENSION
    ngram_min: int = 3
    ngram_max: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.dimension < 16:
            raise ValueError("embedder dimension must be >= 16")
        if not (0 < self.ngram_min <= self.ngram_max):
            raise ValueError("invalid ngram range")

    def to_dict(self) -> dict:
        return {
            "provider": self.provider,
            "dimension": self.dimension,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedderSpec":
        return cls(
            provider=d["provider"],
            dimension=int(d["dimension"]),
            ngram_min=int(d["ngram_min"]),
            ngram_max=int(d["ngram_max"]),
            seed=int(d["seed"]),
        )

    def spec_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass
class EmbeddingVector:
    """Fixed-length L2-normalized vector; ``normalized`` is False only for
    the zero vector produced by empty text."""

    values: np.ndarray
    normalized: bool = True

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])


def _canonical_text(text: str) -> str:
    return _WS_RUN.sub(" ", text.strip().lower())


class HashedNgramEmbedder:
    """Character n-gram (3..5 by default) term frequencies hashed into D
    buckets with log(1+tf) weighting, then L2-normalized.

    Accumulation order is fixed (ascending hash value), so repeated calls are
    bitwise identical regardless of kernel backend.
    """

    def __init__(self, spec: EmbedderSpec):
        self.spec = spec

    def embed(self, text: str) -> EmbeddingVector:
        canon = _canonical_text(text)
        vec = np.zeros(self.spec.dimension, dtype=np.float64)
        if not canon:
            return EmbeddingVector(vec.astype(np.float32), normalized=False)
        hashes = _kernel.ngram_hashes(
            canon.encode("utf-8"), self.spec.ngram_min, self.spec.ngram_max, self.spec.seed
        )
        if hashes.size == 0:
            # text shorter than the smallest n-gram: hash it whole
            hashes = _kernel.ngram_hashes(canon.encode("utf-8"), 1, 1, self.spec.seed)
        grams, counts = np.unique(hashes, return_counts=True)
        buckets = (grams % np.uint64(self.spec.dimension)).astype(np.intp)
        np.add.at(vec, buckets, np.log1p(counts.astype(np.float64)))
        norm = float(np.sqrt(np.dot(vec, vec)))
        if norm == 0.0:
            return EmbeddingVector(vec.astype(np.float32), normalized=False)
        vec /= norm
        return EmbeddingVector(vec.astype(np.float32), normalized=True)


class RemoteEmbedder:
    """HTTP JSON provider slot. POSTs {"text": ...} and expects
    {"vector": [...]}; each call carries its own timeout so it can be
    abandoned independently."""

    def __init__(self, spec: EmbedderSpec, endpoint: str, credential: str = "", timeout: float = 10.0):
        self.spec = spec
        self.endpoint = endpoint
        self.credential = credential
        self.timeout = timeout

    def embed(self, text: str) -> EmbeddingVector:
        body = json.dumps({"text": text, "dimension": self.spec.dimension}).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        if self.credential:
            req.add_header("Authorization", f"Bearer {self.credential}")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise ProviderUnavailable(f"remote embedder failed: {exc}") from exc
        values = np.asarray(payload["vector"], dtype=np.float64)
        if values.shape[0] != self.spec.dimension:
            raise DimensionMismatch(
                f"remote returned dimension {values.shape[0]}, expected {self.spec.dimension}"
            )
        norm = float(np.sqrt(np.dot(values, values)))
        if norm == 0.0:
            return EmbeddingVector(values.astype(np.float32), normalized=False)
        return EmbeddingVector((values / norm).astype(np.float32), normalized=True)


def build_embedder(spec: EmbedderSpec, endpoint: str = "", credential: str = "", timeout: float = 10.0):
    if spec.provider == "local_hashed_ngram":
        return HashedNgramEmbedder(spec)
    if spec.provider == "remote":
        if not endpoint:
            raise ProviderUnavailable("remote embedder requires an endpoint")
        return RemoteEmbedder(spec, endpoint, credential, timeout)
    raise ValueError(f"unknown embedding provider: {spec.provider}")


def cosine_similarity(a: EmbeddingVector | np.ndarray, b: EmbeddingVector | np.ndarray) -> float:
    """Dot product of L2-normalized inputs, computed in float64."""
    va = a.values if isinstance(a, EmbeddingVector) else a
    vb = b.values if isinstance(b, EmbeddingVector) else b
    if va.shape[0] != vb.shape[0]:
        raise DimensionMismatch(f"dimensions differ: {va.shape[0]} vs {vb.shape[0]}")
    return float(va.astype(np.float64) @ vb.astype(np.float64))
