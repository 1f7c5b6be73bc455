"""A loaded deployment: segments, chunk store, catalogs, per-device data,
router, and language detector — everything the answer pipeline and the
server need, built by ingestion and reloadable from a data directory."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .corpus import Chunk, ErrorCodeEntry
from .embedding import EmbedderSpec, build_embedder
from .errors import MissingStores
from .rag.language import LanguageDetector
from .router import IntentRouter
from .tools import DeviceProfile, ErrorCodeCatalog, SelfTestRunner
from .vecstore import StoreSegment

CORE_SEGMENTS = ("user_manual", "service_manual", "error_catalog")
SEGMENT_SUFFIX = ".dds"


def _chunk_to_record(chunk: Chunk) -> dict:
    return {
        "chunk_id": chunk.chunk_id,
        "doc_id": chunk.doc_id,
        "doc_class": chunk.doc_class,
        "ordinal": chunk.ordinal,
        "heading_path": chunk.heading_path,
        "text": chunk.text,
        "char_span": list(chunk.char_span),
    }


def _chunk_from_record(rec: dict) -> Chunk:
    return Chunk(
        chunk_id=rec["chunk_id"],
        doc_id=rec["doc_id"],
        doc_class=rec["doc_class"],
        ordinal=rec["ordinal"],
        heading_path=list(rec["heading_path"]),
        text=rec["text"],
        char_span=tuple(rec["char_span"]),
    )


class Deployment:
    def __init__(
        self,
        embedder_spec: EmbedderSpec,
        segments: dict[str, StoreSegment],
        chunks: dict[str, Chunk],
        catalogs: dict[str, ErrorCodeCatalog],
        router: IntentRouter,
        detector: LanguageDetector,
        selftest: SelfTestRunner | None = None,
        profiles: dict[str, DeviceProfile] | None = None,
        corpus_language: str = "en",
        default_model: str = "",
    ):
        self.embedder_spec = embedder_spec
        self.embedder = build_embedder(embedder_spec)
        self.segments = segments
        self.chunks = chunks
        self.catalogs = catalogs
        self.router = router
        self.detector = detector
        self.selftest = selftest or SelfTestRunner()
        self.profiles = profiles or {}
        self.corpus_language = corpus_language
        self.default_model = default_model or (sorted(catalogs) or [""])[0]

    @property
    def device_models(self) -> list[str]:
        models = set(self.catalogs) | set(self.profiles) | set(self.selftest.models)
        return sorted(m for m in models if m)

    def catalog_codes(self, device_model: str | None = None) -> set[str]:
        model = device_model or self.default_model
        catalog = self.catalogs.get(model)
        if catalog is None:
            # codes from any loaded catalog still force lookup routing
            return set().union(*(c.codes for c in self.catalogs.values())) if self.catalogs else set()
        return catalog.codes

    # -- persistence ----------------------------------------------------------

    def persist(self, data_dir: str | Path) -> None:
        data_dir = Path(data_dir)
        seg_dir = data_dir / "segments"
        seg_dir.mkdir(parents=True, exist_ok=True)
        for name, seg in sorted(self.segments.items()):
            seg.persist(seg_dir / f"{name}{SEGMENT_SUFFIX}")
        with open(data_dir / "chunks.jsonl", "w", encoding="utf-8") as fh:
            for cid in sorted(self.chunks):
                fh.write(json.dumps(_chunk_to_record(self.chunks[cid]), sort_keys=True) + "\n")
        with open(data_dir / "catalog.jsonl", "w", encoding="utf-8") as fh:
            for model in sorted(self.catalogs):
                for entry in self.catalogs[model].entries():
                    rec = {"device_model": model, **entry.to_dict()}
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")

    @classmethod
    def load(
        cls,
        data_dir: str | Path,
        embedder_spec: EmbedderSpec,
        exemplar_path: str | Path | None = None,
        lang_profile_dir: str | Path | None = None,
        selftest_dir: str | Path | None = None,
        profile_dir: str | Path | None = None,
        tau_intent: float | None = None,
        corpus_language: str = "en",
        default_model: str = "",
    ) -> "Deployment":
        data_dir = Path(data_dir)
        seg_dir = data_dir / "segments"
        if not seg_dir.is_dir():
            raise MissingStores(f"no segments directory under {data_dir}")
        segments = {}
        for path in sorted(seg_dir.glob(f"*{SEGMENT_SUFFIX}")):
            seg = StoreSegment.load(path, expected_spec=embedder_spec)
            segments[seg.name] = seg
        if not segments:
            raise MissingStores(f"no segment files under {seg_dir}")

        chunks: dict[str, Chunk] = {}
        chunks_path = data_dir / "chunks.jsonl"
        if chunks_path.exists():
            for line in chunks_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    chunk = _chunk_from_record(json.loads(line))
                    chunks[chunk.chunk_id] = chunk

        catalogs: dict[str, ErrorCodeCatalog] = {}
        catalog_path = data_dir / "catalog.jsonl"
        if catalog_path.exists():
            grouped: dict[str, list[ErrorCodeEntry]] = {}
            for line in catalog_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                model = rec.pop("device_model")
                grouped.setdefault(model, []).append(ErrorCodeEntry(**rec))
            catalogs = {m: ErrorCodeCatalog(m, entries) for m, entries in grouped.items()}

        embedder = build_embedder(embedder_spec)
        router = IntentRouter(embedder)
        if tau_intent is not None:
            router.tau_intent = tau_intent
        if exemplar_path is None:
            with resources.as_file(
                resources.files("devicedesk.data") / "intent_exemplars.txt"
            ) as p:
                router.load_exemplar_file(p)
        else:
            router.load_exemplar_file(exemplar_path)

        if lang_profile_dir is None:
            with resources.as_file(resources.files("devicedesk.data") / "lang_profiles") as p:
                detector = LanguageDetector.from_dir(p)
        else:
            detector = LanguageDetector.from_dir(lang_profile_dir)

        selftest = SelfTestRunner()
        if selftest_dir and Path(selftest_dir).is_dir():
            selftest.load_script_dir(selftest_dir)
        profiles: dict[str, DeviceProfile] = {}
        if profile_dir and Path(profile_dir).is_dir():
            for path in sorted(Path(profile_dir).glob("*.txt")):
                profiles[path.stem] = DeviceProfile.from_file(path, path.stem)

        return cls(
            embedder_spec=embedder_spec,
            segments=segments,
            chunks=chunks,
            catalogs=catalogs,
            router=router,
            detector=detector,
            selftest=selftest,
            profiles=profiles,
            corpus_language=corpus_language,
            default_model=default_model,
        )
