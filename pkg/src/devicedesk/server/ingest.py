"""Corpus ingestion: manifest -> parsed documents -> chunks -> embedded,
persisted segments plus the error-code catalog.

Deterministic end to end: document order comes from the manifest, chunk ids
from ordinals, vectors from the seeded embedder, and the HNSW graph from the
seeded level RNG — re-ingesting an unchanged corpus reproduces every segment
file byte for byte.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import (
    ChunkingPolicy,
    chunk_document,
    embedding_text_for_chunk,
    load_manifest,
    parse_document,
    parse_error_catalog,
)
from ..deployment import Deployment
from ..embedding import build_embedder
from ..errors import DeviceDeskError, DuplicateCode
from ..tools import ErrorCodeCatalog
from ..vecstore import StoreSegment
from .config import ServerConfig

logger = logging.getLogger(__name__)


@dataclass
class IngestReport:
    documents: int = 0
    chunks: int = 0
    segment_counts: dict = field(default_factory=dict)
    catalog_entries: int = 0
    malformed_rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def to_payload(self) -> dict:
        return {
            "documents": self.documents,
            "chunks": self.chunks,
            "segment_counts": self.segment_counts,
            "catalog_entries": self.catalog_entries,
            "malformed_rows": self.malformed_rows,
            "errors": self.errors,
        }


def ingest(manifest_path: str | Path, config: ServerConfig) -> tuple[Deployment, IngestReport]:
    """Build and persist a deployment from a corpus manifest. Per-file parse
    errors are collected; duplicate error codes abort (lookup precision
    depends on an unambiguous map)."""
    entries = load_manifest(manifest_path)
    spec = config.embedder_spec()
    embedder = build_embedder(spec)
    policy = ChunkingPolicy()
    report = IngestReport()

    segments: dict[str, StoreSegment] = {}
    chunks_store = {}
    catalog_entries: dict[str, list] = {}
    default_model = config.default_model or entries[0].device_model

    for entry in entries:
        try:
            raw = entry.path.read_text(encoding="utf-8")
            doc = parse_document(
                raw,
                {
                    "doc_id": entry.doc_id,
                    "device_model": entry.device_model,
                    "doc_class": entry.doc_class,
                    "language": entry.language,
                    "title": entry.title,
                },
            )
        except (OSError, DeviceDeskError, ValueError) as exc:
            report.errors.append({"path": str(entry.path), "error": str(exc)})
            logger.warning("skipping %s: %s", entry.path, exc)
            continue

        chunks = chunk_document(doc, policy)
        if doc.doc_class == "error_catalog":
            result = parse_error_catalog(doc, chunks=chunks)  # DuplicateCode is fatal
            catalog_entries.setdefault(entry.device_model, []).extend(result.entries)
            report.catalog_entries += len(result.entries)
            report.malformed_rows += [
                {"doc_id": doc.doc_id, "line_no": m.line_no, "reason": m.reason}
                for m in result.malformed
            ]

        segment = segments.get(doc.doc_class)
        if segment is None:
            segment = StoreSegment(
                doc.doc_class, default_model, spec, index_kind="flat",
                hnsw_params=config.hnsw_params(),
            )
            segments[doc.doc_class] = segment
        for chunk in chunks:
            vec = embedder.embed(embedding_text_for_chunk(chunk))
            segment.insert(chunk.chunk_id, vec, payload_ref=chunk.chunk_id)
            chunks_store[chunk.chunk_id] = chunk
        report.documents += 1
        report.chunks += len(chunks)

    report.segment_counts = {name: len(seg) for name, seg in sorted(segments.items())}

    deployment = Deployment(
        embedder_spec=spec,
        segments=segments,
        chunks=chunks_store,
        catalogs={m: ErrorCodeCatalog(m, ents) for m, ents in catalog_entries.items()},
        router=_make_router(config, embedder),
        detector=_make_detector(config),
        corpus_language=config.corpus_language,
        default_model=default_model,
    )
    _attach_device_data(deployment, config)

    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    deployment.persist(data_dir)
    return deployment, report


def load_deployment(config: ServerConfig) -> Deployment:
    return Deployment.load(
        config.data_dir,
        config.embedder_spec(),
        exemplar_path=config.exemplar_path or None,
        lang_profile_dir=config.language_profile_dir or None,
        selftest_dir=config.selftest_dir or None,
        profile_dir=config.maintenance_profile_dir or None,
        tau_intent=config.tau_intent,
        corpus_language=config.corpus_language,
        default_model=config.default_model,
    )


def _make_router(config: ServerConfig, embedder):
    from importlib import resources

    from ..router import IntentRouter

    router = IntentRouter(embedder, tau_intent=config.tau_intent)
    if config.exemplar_path:
        router.load_exemplar_file(config.exemplar_path)
    else:
        with resources.as_file(resources.files("devicedesk.data") / "intent_exemplars.txt") as p:
            router.load_exemplar_file(p)
    return router


def _make_detector(config: ServerConfig):
    from importlib import resources

    from ..rag.language import LanguageDetector

    if config.language_profile_dir:
        return LanguageDetector.from_dir(config.language_profile_dir)
    with resources.as_file(resources.files("devicedesk.data") / "lang_profiles") as p:
        return LanguageDetector.from_dir(p)


def _attach_device_data(deployment: Deployment, config: ServerConfig) -> None:
    from ..tools import DeviceProfile

    if config.selftest_dir and Path(config.selftest_dir).is_dir():
        deployment.selftest.load_script_dir(config.selftest_dir)
    if config.maintenance_profile_dir and Path(config.maintenance_profile_dir).is_dir():
        for path in sorted(Path(config.maintenance_profile_dir).glob("*.txt")):
            deployment.profiles[path.stem] = DeviceProfile.from_file(path, path.stem)
