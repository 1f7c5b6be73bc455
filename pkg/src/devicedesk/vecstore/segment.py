"""Named persistent vector store segments.

A segment keeps one float32 matrix shared by both index kinds: exact flat
search (float64 dot-product scan) and the incremental HNSW graph. Ranking is
deterministic: score descending, ties broken by chunk_id ascending.

Segment file layout (all little-endian):
    magic "DDSKSEG1" | u16 format version | 32-byte sha256 of the remainder |
    u32 header length | canonical JSON header (embedder spec incl. seed and
    dimension, names, index kind, hnsw params) | entry table | vector block
    (float32) | serialized HNSW adjacency
"""

from __future__ import annotations

import hashlib
import io
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..embedding import EmbedderSpec, EmbeddingVector
from ..errors import (
    CorruptFile,
    DimensionMismatch,
    DuplicateId,
    EmbedderSpecMismatch,
    EmptySegment,
    FormatVersionMismatch,
    MixedEmbedderSpec,
)
from .hnsw import HnswIndex, HnswParams

MAGIC = b"DDSKSEG1"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float
    segment_name: str


class StoreSegment:
    def __init__(
        self,
        name: str,
        device_class: str,
        embedder_spec: EmbedderSpec,
        index_kind: str = "flat",
        hnsw_params: HnswParams | None = None,
    ):
        if index_kind not in ("flat", "hnsw"):
            raise ValueError(f"unknown index kind: {index_kind}")
        self.name = name
        self.device_class = device_class
        self.embedder_spec = embedder_spec
        self.index_kind = index_kind
        self.hnsw_params = hnsw_params or HnswParams()
        self.index = HnswIndex(embedder_spec.dimension, self.hnsw_params)
        self.chunk_ids: list[str] = []
        self.payload_refs: list[str] = []
        self._id_to_node: dict[str, int] = {}
        self._tombstones: set[int] = set()

    def __len__(self) -> int:
        return len(self.chunk_ids) - len(self._tombstones)

    def __contains__(self, chunk_id: str) -> bool:
        node = self._id_to_node.get(chunk_id)
        return node is not None and node not in self._tombstones

    # -- writes -----------------------------------------------------------------

    def insert(self, chunk_id: str, vector, payload_ref: str = "") -> None:
        values = vector.values if isinstance(vector, EmbeddingVector) else np.asarray(vector)
        if values.shape[0] != self.embedder_spec.dimension:
            raise DimensionMismatch(
                f"vector dimension {values.shape[0]} != segment dimension "
                f"{self.embedder_spec.dimension}"
            )
        if chunk_id in self._id_to_node:
            raise DuplicateId(f"chunk {chunk_id!r} already present in segment {self.name}")
        node = self.index.add(values.astype(np.float32, copy=False))
        self.chunk_ids.append(chunk_id)
        self.payload_refs.append(payload_ref or chunk_id)
        self._id_to_node[chunk_id] = node

    def delete(self, chunk_id: str) -> None:
        """Tombstone; space is reclaimed by rebuild()."""
        node = self._id_to_node.get(chunk_id)
        if node is None or node in self._tombstones:
            raise KeyError(chunk_id)
        self._tombstones.add(node)

    def rebuild(self) -> "StoreSegment":
        """Re-insert live entries into a fresh segment (compacts tombstones)."""
        fresh = StoreSegment(
            self.name, self.device_class, self.embedder_spec, self.index_kind, self.hnsw_params
        )
        for node, chunk_id in enumerate(self.chunk_ids):
            if node not in self._tombstones:
                fresh.insert(chunk_id, self.index.vectors[node], self.payload_refs[node])
        return fresh

    # -- reads ------------------------------------------------------------------

    def _as_query(self, query) -> np.ndarray:
        values = query.values if isinstance(query, EmbeddingVector) else np.asarray(query)
        if values.shape[0] != self.embedder_spec.dimension:
            raise DimensionMismatch(
                f"query dimension {values.shape[0]} != {self.embedder_spec.dimension}"
            )
        return values.astype(np.float64)

    def search(self, query, k: int, mode: str | None = None) -> list[SearchHit]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if len(self) == 0:
            raise EmptySegment(f"segment {self.name} is empty")
        mode = mode or self.index_kind
        q = self._as_query(query)
        if mode == "flat":
            return self._search_flat(q, k)
        return self._search_hnsw(q, k)

    def _search_flat(self, q: np.ndarray, k: int) -> list[SearchHit]:
        scores = self.index.vectors.astype(np.float64) @ q
        ids = np.arange(len(scores))
        order = np.lexsort((np.asarray(self.chunk_ids), -scores))
        hits = []
        for node in order:
            if int(node) in self._tombstones:
                continue
            hits.append(SearchHit(self.chunk_ids[node], float(scores[node]), self.name))
            if len(hits) == k:
                break
        return hits

    def _search_hnsw(self, q: np.ndarray, k: int) -> list[SearchHit]:
        want = min(k + len(self._tombstones), len(self.chunk_ids))
        node_ids, _ = self.index.search(q, want)
        live = [int(n) for n in node_ids if int(n) not in self._tombstones]
        # graph distances are float32; recompute exact scores for the few
        # returned rows so hit scores match the flat path's precision
        scores = self.index.vectors[live].astype(np.float64) @ q
        hits = [
            SearchHit(self.chunk_ids[n], float(s), self.name) for n, s in zip(live, scores)
        ]
        hits.sort(key=lambda h: (-h.score, h.chunk_id))
        return hits[:k]

    # -- persistence --------------------------------------------------------------

    def persist(self, path: str | Path) -> None:
        path = Path(path)
        body = io.BytesIO()
        header = {
            "name": self.name,
            "device_class": self.device_class,
            "embedder_spec": self.embedder_spec.to_dict(),
            "index_kind": self.index_kind,
            "hnsw_params": self.hnsw_params.to_dict(),
            "count": len(self.chunk_ids),
            "dimension": self.embedder_spec.dimension,
            "tombstones": sorted(self._tombstones),
        }
        hdr = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
        body.write(struct.pack("<I", len(hdr)))
        body.write(hdr)
        body.write(struct.pack("<I", len(self.chunk_ids)))
        for cid, ref in zip(self.chunk_ids, self.payload_refs):
            for s in (cid, ref):
                raw = s.encode("utf-8")
                body.write(struct.pack("<H", len(raw)))
                body.write(raw)
        vectors = np.ascontiguousarray(self.index.vectors, dtype="<f4")
        body.write(vectors.tobytes())

        state = self.index.state_dict()
        body.write(struct.pack("<iiQ", state["entry_point"], state["max_level"], state["draws"]))
        body.write(np.asarray(state["node_levels"], dtype="<i4").tobytes())
        body.write(struct.pack("<B", len(state["levels"])))
        for lv in state["levels"]:
            body.write(struct.pack("<H", lv["deg_cap"]))
            body.write(np.asarray(lv["cnt"], dtype="<i4").tobytes())
            body.write(np.ascontiguousarray(lv["adj"], dtype="<i4").tobytes())

        payload = body.getvalue()
        digest = hashlib.sha256(payload).digest()
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<H", FORMAT_VERSION))
            fh.write(digest)
            fh.write(payload)
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path, expected_spec: EmbedderSpec | None = None) -> "StoreSegment":
        path = Path(path)
        raw = path.read_bytes()
        if len(raw) < len(MAGIC) + 2 + 32 or raw[: len(MAGIC)] != MAGIC:
            raise CorruptFile(f"{path} is not a segment file")
        (version,) = struct.unpack_from("<H", raw, len(MAGIC))
        if version != FORMAT_VERSION:
            raise FormatVersionMismatch(f"{path}: format v{version}, expected v{FORMAT_VERSION}")
        digest = raw[len(MAGIC) + 2 : len(MAGIC) + 2 + 32]
        payload = raw[len(MAGIC) + 2 + 32 :]
        if hashlib.sha256(payload).digest() != digest:
            raise CorruptFile(f"{path}: checksum mismatch")

        buf = memoryview(payload)
        pos = 0

        def take(fmt):
            nonlocal pos
            out = struct.unpack_from(fmt, buf, pos)
            pos += struct.calcsize(fmt)
            return out

        (hdr_len,) = take("<I")
        header = json.loads(bytes(buf[pos : pos + hdr_len]).decode("utf-8"))
        pos += hdr_len
        spec = EmbedderSpec.from_dict(header["embedder_spec"])
        if expected_spec is not None and spec != expected_spec:
            raise EmbedderSpecMismatch(
                f"{path}: segment built with a different embedder spec "
                f"({spec.spec_hash()} != {expected_spec.spec_hash()})"
            )
        seg = cls(
            header["name"],
            header["device_class"],
            spec,
            header["index_kind"],
            HnswParams.from_dict(header["hnsw_params"]),
        )
        (n_ids,) = take("<I")
        try:
            for _ in range(n_ids):
                (ln,) = take("<H")
                cid = bytes(buf[pos : pos + ln]).decode("utf-8")
                pos += ln
                (ln,) = take("<H")
                ref = bytes(buf[pos : pos + ln]).decode("utf-8")
                pos += ln
                seg.chunk_ids.append(cid)
                seg.payload_refs.append(ref)

            n = int(header["count"])
            dim = int(header["dimension"])
            vec_bytes = n * dim * 4
            vectors = np.frombuffer(buf[pos : pos + vec_bytes], dtype="<f4").reshape(n, dim)
            pos += vec_bytes

            entry_point, max_level, draws = take("<iiQ")
            node_levels = np.frombuffer(buf[pos : pos + 4 * n], dtype="<i4").copy()
            pos += 4 * n
            (n_levels,) = take("<B")
            levels = []
            for _ in range(n_levels):
                (deg_cap,) = take("<H")
                cnt = np.frombuffer(buf[pos : pos + 4 * n], dtype="<i4").copy()
                pos += 4 * n
                adj = np.frombuffer(buf[pos : pos + 4 * n * deg_cap], dtype="<i4").copy()
                pos += 4 * n * deg_cap
                levels.append({"deg_cap": deg_cap, "cnt": cnt, "adj": adj.reshape(n, deg_cap)})
        except (struct.error, ValueError) as exc:
            raise CorruptFile(f"{path}: truncated segment body") from exc

        state = {
            "params": header["hnsw_params"],
            "dimension": dim,
            "count": n,
            "entry_point": entry_point,
            "max_level": max_level,
            "draws": draws,
            "node_levels": node_levels,
            "levels": levels,
        }
        seg.index = HnswIndex.from_state(state, np.ascontiguousarray(vectors, dtype=np.float32))
        seg._id_to_node = {cid: i for i, cid in enumerate(seg.chunk_ids)}
        seg._tombstones = set(header.get("tombstones", []))
        return seg


def search_multi(segments: list[StoreSegment], query, k: int, mode: str | None = None) -> list[SearchHit]:
    """Global top-k across segments sharing one embedder spec; empty segments
    are skipped (the answer path treats them as contributing nothing)."""
    if not segments:
        return []
    spec = segments[0].embedder_spec
    for seg in segments[1:]:
        if seg.embedder_spec != spec:
            raise MixedEmbedderSpec(
                f"segments {segments[0].name} and {seg.name} use different embedder specs"
            )
    hits: list[SearchHit] = []
    for seg in segments:
        if len(seg) == 0:
            continue
        hits.extend(seg.search(query, k, mode=mode))
    hits.sort(key=lambda h: (-h.score, h.chunk_id))
    return hits[:k]
