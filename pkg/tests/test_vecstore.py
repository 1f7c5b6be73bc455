"""Segment behavior: exact flat search, merging, persistence."""

import numpy as np
import pytest

from devicedesk.embedding import EmbedderSpec
from devicedesk.errors import (
    CorruptFile,
    DimensionMismatch,
    DuplicateId,
    EmbedderSpecMismatch,
    EmptySegment,
    FormatVersionMismatch,
    MixedEmbedderSpec,
)
from devicedesk.vecstore import StoreSegment, search_multi

SPEC = EmbedderSpec(dimension=32, seed=5)


def unit(v):
    v = np.asarray(v, dtype=np.float32)
    return v / np.linalg.norm(v)


def random_segment(n, seed=3, name="seg", spec=SPEC):
    rng = np.random.default_rng(seed)
    seg = StoreSegment(name, "USX-300", spec)
    vecs = rng.standard_normal((n, spec.dimension)).astype(np.float32)
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    for i in range(n):
        seg.insert(f"{name}-{i:05d}", vecs[i])
    return seg, vecs


def brute_force_oracle(vecs, chunk_ids, q, k):
    """Independent O(nD) scalar-loop ranking oracle."""
    scored = []
    for cid, row in zip(chunk_ids, vecs):
        s = 0.0
        for a, b in zip(row, q):
            s += float(a) * float(b)
        scored.append((cid, s))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return scored[:k]


class TestInsert:
    def test_self_retrieval_score_one(self):
        seg, vecs = random_segment(10)
        hits = seg.search(vecs[4], k=1, mode="flat")
        assert hits[0].chunk_id == "seg-00004"
        assert hits[0].score == pytest.approx(1.0, abs=1e-6)

    def test_duplicate_id(self):
        seg, vecs = random_segment(3)
        with pytest.raises(DuplicateId):
            seg.insert("seg-00001", vecs[0])

    def test_dimension_mismatch(self):
        seg, _ = random_segment(2)
        with pytest.raises(DimensionMismatch):
            seg.insert("other", np.ones(64, dtype=np.float32))

    def test_thousand_inserts_counts(self):
        seg, _ = random_segment(1000)
        assert len(seg) == 1000
        assert seg.index.count == 1000  # HNSW node count tracks inserts


class TestFlatSearch:
    def test_matches_brute_force_oracle(self):
        seg, vecs = random_segment(1000)
        rng = np.random.default_rng(17)
        for _ in range(10):
            q = unit(rng.standard_normal(SPEC.dimension))
            expected = brute_force_oracle(vecs, seg.chunk_ids, q.astype(np.float64), 10)
            hits = seg.search(q, k=10, mode="flat")
            assert [h.chunk_id for h in hits] == [cid for cid, _ in expected]
            for h, (_, score) in zip(hits, expected):
                assert h.score == pytest.approx(score, abs=1e-9)

    def test_k_larger_than_segment(self):
        seg, _ = random_segment(5)
        hits = seg.search(unit(np.ones(SPEC.dimension)), k=50, mode="flat")
        assert len(hits) == 5
        assert all(a.score >= b.score for a, b in zip(hits, hits[1:]))

    def test_equal_scores_tie_by_chunk_id(self):
        seg = StoreSegment("ties", "USX-300", SPEC)
        v = unit(np.ones(SPEC.dimension))
        seg.insert("b-chunk", v)
        seg.insert("a-chunk", v)
        hits = seg.search(v, k=2, mode="flat")
        assert [h.chunk_id for h in hits] == ["a-chunk", "b-chunk"]

    def test_empty_segment_raises(self):
        seg = StoreSegment("empty", "USX-300", SPEC)
        with pytest.raises(EmptySegment):
            seg.search(unit(np.ones(SPEC.dimension)), k=1)

    def test_monotonic_scores_and_tie_order(self):
        seg, _ = random_segment(200)
        hits = seg.search(unit(np.arange(SPEC.dimension) + 1.0), k=200, mode="flat")
        for a, b in zip(hits, hits[1:]):
            assert a.score > b.score or (a.score == b.score and a.chunk_id < b.chunk_id)


class TestSearchMulti:
    def test_empty_segment_skipped(self):
        full, vecs = random_segment(20, name="full")
        empty = StoreSegment("hollow", "USX-300", SPEC)
        hits = search_multi([empty, full], vecs[0], k=5)
        assert hits and all(h.segment_name == "full" for h in hits)

    def test_equals_union_scan_oracle(self):
        a, va = random_segment(300, seed=1, name="aa")
        b, vb = random_segment(300, seed=2, name="bb")
        rng = np.random.default_rng(9)
        q = unit(rng.standard_normal(SPEC.dimension))
        union_ids = a.chunk_ids + b.chunk_ids
        union_vecs = np.vstack([va, vb])
        expected = brute_force_oracle(union_vecs, union_ids, q.astype(np.float64), 7)
        hits = search_multi([a, b], q, k=7, mode="flat")
        assert [h.chunk_id for h in hits] == [cid for cid, _ in expected]

    def test_k1_returns_global_best(self):
        segs = [random_segment(50, seed=s, name=f"s{s}")[0] for s in range(3)]
        rng = np.random.default_rng(33)
        q = unit(rng.standard_normal(SPEC.dimension))
        best = search_multi(segs, q, k=1, mode="flat")[0]
        all_hits = [h for seg in segs for h in seg.search(q, k=1, mode="flat")]
        assert best.score == max(h.score for h in all_hits)

    def test_mixed_spec_rejected(self):
        a, _ = random_segment(5, name="a")
        other = EmbedderSpec(dimension=32, seed=99)
        b, _ = random_segment(5, name="b", spec=other)
        with pytest.raises(MixedEmbedderSpec):
            search_multi([a, b], unit(np.ones(32)), k=1)


class TestPersistence:
    def test_round_trip_identical_results(self, tmp_path):
        seg, _ = random_segment(300)
        rng = np.random.default_rng(5)
        queries = [unit(rng.standard_normal(SPEC.dimension)) for _ in range(100)]
        before = [seg.search(q, k=5, mode="flat") for q in queries]
        before_hnsw = [seg.search(q, k=5, mode="hnsw") for q in queries]
        path = tmp_path / "seg.dds"
        seg.persist(path)
        loaded = StoreSegment.load(path)
        for q, hits, hnsw_hits in zip(queries, before, before_hnsw):
            again = loaded.search(q, k=5, mode="flat")
            assert [(h.chunk_id, h.score) for h in again] == [(h.chunk_id, h.score) for h in hits]
            again_h = loaded.search(q, k=5, mode="hnsw")
            assert [(h.chunk_id, h.score) for h in again_h] == [
                (h.chunk_id, h.score) for h in hnsw_hits
            ]

    def test_persist_is_byte_deterministic(self, tmp_path):
        a, _ = random_segment(50)
        b, _ = random_segment(50)
        a.persist(tmp_path / "a.dds")
        b.persist(tmp_path / "b.dds")
        assert (tmp_path / "a.dds").read_bytes() == (tmp_path / "b.dds").read_bytes()

    def test_truncated_file_rejected(self, tmp_path):
        seg, _ = random_segment(20)
        path = tmp_path / "seg.dds"
        seg.persist(path)
        raw = path.read_bytes()
        path.write_bytes(raw[: len(raw) // 2])
        with pytest.raises(CorruptFile):
            StoreSegment.load(path)

    def test_flipped_byte_rejected(self, tmp_path):
        seg, _ = random_segment(20)
        path = tmp_path / "seg.dds"
        seg.persist(path)
        raw = bytearray(path.read_bytes())
        raw[-3] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(CorruptFile):
            StoreSegment.load(path)

    def test_spec_mismatch_on_attach(self, tmp_path):
        seg, _ = random_segment(10)
        path = tmp_path / "seg.dds"
        seg.persist(path)
        with pytest.raises(EmbedderSpecMismatch):
            StoreSegment.load(path, expected_spec=EmbedderSpec(dimension=32, seed=999))

    def test_version_mismatch(self, tmp_path):
        seg, _ = random_segment(5)
        path = tmp_path / "seg.dds"
        seg.persist(path)
        raw = bytearray(path.read_bytes())
        raw[8] = 99  # format version field
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatVersionMismatch):
            StoreSegment.load(path)

    def test_post_load_inserts_match_uninterrupted_build(self, tmp_path):
        whole, vecs = random_segment(60)
        half, _ = random_segment(40)  # same rng stream: first 40 match whole's
        path = tmp_path / "half.dds"
        half.persist(path)
        resumed = StoreSegment.load(path)
        for i in range(40, 60):
            resumed.insert(f"seg-{i:05d}", vecs[i])
        q = unit(np.ones(SPEC.dimension))
        a = resumed.search(q, k=10, mode="hnsw")
        b = whole.search(q, k=10, mode="hnsw")
        assert [(h.chunk_id, h.score) for h in a] == [(h.chunk_id, h.score) for h in b]


class TestTombstones:
    def test_delete_hides_entry(self):
        seg, vecs = random_segment(30)
        seg.delete("seg-00003")
        assert len(seg) == 29
        hits = seg.search(vecs[3], k=30, mode="flat")
        assert "seg-00003" not in [h.chunk_id for h in hits]
        hits_h = seg.search(vecs[3], k=5, mode="hnsw")
        assert "seg-00003" not in [h.chunk_id for h in hits_h]

    def test_rebuild_compacts(self):
        seg, vecs = random_segment(30)
        seg.delete("seg-00003")
        fresh = seg.rebuild()
        assert len(fresh) == 29
        assert fresh.index.count == 29
        assert "seg-00003" not in fresh.chunk_ids
