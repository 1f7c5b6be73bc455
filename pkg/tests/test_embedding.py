"""Deterministic local embedder and similarity."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from devicedesk._kernel import load_backend, pyfallback
from devicedesk.embedding import (
    EmbedderSpec,
    HashedNgramEmbedder,
    build_embedder,
    cosine_similarity,
)
from devicedesk.errors import DimensionMismatch, ProviderUnavailable


@pytest.fixture(scope="module")
def embedder():
    return HashedNgramEmbedder(EmbedderSpec(seed=7))


class TestEmbedText:
    def test_bitwise_determinism(self, embedder):
        a = embedder.embed("gain calibration")
        b = embedder.embed("gain calibration")
        assert a.values.tobytes() == b.values.tobytes()

    def test_empty_text_zero_vector(self, embedder):
        v = embedder.embed("")
        assert not v.normalized
        assert not v.values.any()

    def test_unit_norm(self, embedder):
        v = embedder.embed("transducer cleaning procedure")
        assert abs(np.linalg.norm(v.values.astype(np.float64)) - 1.0) < 1e-6

    def test_similarity_ordering(self, embedder):
        base = embedder.embed("probe connector fault")
        near = embedder.embed("probe connector fault level")
        far = embedder.embed("annual maintenance calendar")
        assert cosine_similarity(base, near) > cosine_similarity(base, far)

    def test_whitespace_canonicalization(self, embedder):
        a = embedder.embed("Probe   Connector\tFault")
        b = embedder.embed("probe connector fault")
        assert a.values.tobytes() == b.values.tobytes()

    def test_tiny_text_still_embeds(self, embedder):
        v = embedder.embed("ok")  # shorter than ngram_min
        assert v.normalized

    def test_different_seed_different_space(self):
        a = HashedNgramEmbedder(EmbedderSpec(seed=1)).embed("probe fault")
        b = HashedNgramEmbedder(EmbedderSpec(seed=2)).embed("probe fault")
        assert a.values.tobytes() != b.values.tobytes()

    @settings(max_examples=50, deadline=None)
    @given(st.text(alphabet="abcdefgh ", min_size=30, max_size=80))
    def test_locality_property(self, embedder, text):
        # near: >80% shared n-grams by construction; far: disjoint alphabet
        near = text + " xyz"
        far = "0123456789" * 6
        v, vn, vf = (embedder.embed(t) for t in (text, near, far))
        if v.normalized and vn.normalized:
            assert cosine_similarity(v, vn) > cosine_similarity(v, vf)


class TestCosine:
    def test_identical_vectors(self, embedder):
        v = embedder.embed("power supply check")
        assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-6)

    def test_one_hot_orthogonal(self):
        e1 = np.zeros(32, dtype=np.float32)
        e2 = np.zeros(32, dtype=np.float32)
        e1[0] = 1.0
        e2[1] = 1.0
        assert cosine_similarity(e1, e2) == 0.0

    def test_matches_scalar_loop_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = rng.standard_normal(64).astype(np.float32)
            b = rng.standard_normal(64).astype(np.float32)
            oracle = 0.0
            for x, y in zip(a, b):  # independent scalar-loop oracle
                oracle += float(x) * float(y)
            assert cosine_similarity(a, b) == pytest.approx(oracle, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_similarity(np.ones(16, dtype=np.float32), np.ones(32, dtype=np.float32))

    def test_symmetry(self, embedder):
        a = embedder.embed("probe")
        b = embedder.embed("gel warmer")
        assert cosine_similarity(a, b) == pytest.approx(cosine_similarity(b, a), abs=1e-12)


class TestBackendParity:
    def test_ngram_hashes_identical(self):
        try:
            hot = load_backend("cython")
        except ImportError:
            pytest.skip("compiled kernel not built")
        for text in ("abc", "probe connector fault", "x", ""):
            data = text.encode("utf-8")
            assert np.array_equal(
                hot.ngram_hashes(data, 3, 5, 42), pyfallback.ngram_hashes(data, 3, 5, 42)
            )

    def test_embeddings_identical_across_backends(self, monkeypatch):
        try:
            hot = load_backend("cython")
        except ImportError:
            pytest.skip("compiled kernel not built")
        import devicedesk._kernel as kernel

        spec = EmbedderSpec(seed=3)
        monkeypatch.setattr(kernel, "ngram_hashes", hot.ngram_hashes)
        a = HashedNgramEmbedder(spec).embed("ultrasound gain drift")
        monkeypatch.setattr(kernel, "ngram_hashes", pyfallback.ngram_hashes)
        b = HashedNgramEmbedder(spec).embed("ultrasound gain drift")
        assert a.values.tobytes() == b.values.tobytes()


class TestProviders:
    def test_remote_requires_endpoint(self):
        with pytest.raises(ProviderUnavailable):
            build_embedder(EmbedderSpec(provider="remote"))

    def test_remote_unreachable_raises(self):
        emb = build_embedder(
            EmbedderSpec(provider="remote"), endpoint="http://127.0.0.1:1/embed", timeout=0.2
        )
        with pytest.raises(ProviderUnavailable):
            emb.embed("anything")

    def test_spec_hash_stable(self):
        assert EmbedderSpec(seed=5).spec_hash() == EmbedderSpec(seed=5).spec_hash()
        assert EmbedderSpec(seed=5).spec_hash() != EmbedderSpec(seed=6).spec_hash()
