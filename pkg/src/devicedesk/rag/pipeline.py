"""The retrieval-augmented answer pipeline.

Flow: classify intent -> tool dispatch (structured payload + supporting
citations) or instructional retrieval -> grounding check -> generation.
Every non-refusal answer cites chunks that were actually retrieved for the
request; refusals carry the fixed localizable template and zero citations.
The default generation provider is extractive and fully deterministic.
"""

from __future__ import annotations

import json
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import EmptyQuery, ProviderTimeout, ProviderUnavailable, StoreUnavailable
from ..tools import lookup_error_code
from ..vecstore import SearchHit, search_multi
from .language import IdentityTranslation, LanguageGuess

DEFAULT_TAU_GROUND = 0.18
DEFAULT_K = 5
GENERATION_BUDGET = 2400
SPAN_BUDGET = 700

INTENT_SEGMENTS = {
    "instructional": ("user_manual", "service_manual", "community"),
    "error_code_lookup": ("error_catalog",),
    "log_analysis": ("service_manual", "user_manual"),
    "self_test": ("service_manual", "user_manual"),
    "maintenance_schedule": ("user_manual", "service_manual"),
    "forum_search": ("community",),
    "unknown": ("user_manual", "service_manual", "community"),
}

_CITE_MARK = re.compile(r"\[([\w][\w.\-]*#\d+)\]")


@dataclass
class QueryRequest:
    text: str
    language: str | None = None
    device_model: str | None = None
    session_id: str | None = None
    k: int = DEFAULT_K
    requested_segments: list[str] | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass
class ContextHit:
    chunk_id: str
    score: float
    segment_name: str
    text: str
    heading_path: list[str]


@dataclass
class RetrievedContext:
    hits: list[ContextHit]
    assembled_context: str

    @classmethod
    def from_hits(cls, hits: list[SearchHit], chunks: dict) -> "RetrievedContext":
        joined = []
        for h in hits:
            chunk = chunks.get(h.chunk_id)
            joined.append(
                ContextHit(
                    chunk_id=h.chunk_id,
                    score=h.score,
                    segment_name=h.segment_name,
                    text=chunk.text if chunk else "",
                    heading_path=list(chunk.heading_path) if chunk else [],
                )
            )
        parts = []
        for ch in joined:
            lineage = " > ".join(ch.heading_path)
            header = f"[{ch.chunk_id}]" + (f" {lineage}" if lineage else "")
            parts.append(f"{header}\n{ch.text}")
        return cls(hits=joined, assembled_context="\n\n---\n\n".join(parts))


@dataclass
class RagAnswer:
    text: str
    citations: list[str]
    grounded: bool
    confidence: float
    latency_ms: float
    language: str
    intent: str = "instructional"
    flags: list[str] = field(default_factory=list)
    retrieved: list[str] = field(default_factory=list)
    tool_payload: dict | None = None

    def to_payload(self) -> dict:
        return {
            "text": self.text,
            "citations": self.citations,
            "grounded": self.grounded,
            "confidence": self.confidence,
            "latency_ms": self.latency_ms,
            "language": self.language,
            "intent": self.intent,
            "flags": self.flags,
            "retrieved": self.retrieved,
            "tool_payload": self.tool_payload,
        }


# ---------------------------------------------------------------------------
# refusal templates
# ---------------------------------------------------------------------------


class RefusalTemplates:
    """Fixed localizable refusal strings keyed by (kind, language tag)."""

    def __init__(self, templates: dict):
        self._templates = templates

    @classmethod
    def from_file(cls, path: str | Path) -> "RefusalTemplates":
        templates = {}
        for line in Path(path).read_text(encoding="utf-8").split("\n"):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            tag, kind, text = (p.strip() for p in stripped.split("|", 2))
            templates[(kind, tag)] = text
        return cls(templates)

    @classmethod
    def shipped(cls) -> "RefusalTemplates":
        with resources.as_file(resources.files("devicedesk.data") / "refusals.txt") as p:
            return cls.from_file(p)

    def get(self, kind: str, language: str, **fmt) -> str:
        text = self._templates.get((kind, language)) or self._templates[(kind, "en")]
        return text.format(**fmt) if fmt else text


# ---------------------------------------------------------------------------
# generation providers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenerationProviderSpec:
    provider: str = "extractive_local"  # requires no network
    prompt_template: str = "answer"
    timeout: float = 10.0


class ExtractiveProvider:
    """Deterministic generation: heading lineage + hit text in rank order,
    truncated to a budget, each span labeled with its chunk id."""

    name = "extractive_local"

    def generate(self, context: RetrievedContext, query: str, language: str) -> str:
        parts = []
        used = 0
        for ch in context.hits:
            lineage = " > ".join(ch.heading_path)
            text = ch.text.strip()
            if len(text) > SPAN_BUDGET:
                cut = text.rfind(". ", 0, SPAN_BUDGET)
                text = text[: cut + 1] if cut > 0 else text[:SPAN_BUDGET]
            span = f"[{ch.chunk_id}]" + (f" {lineage}:" if lineage else "") + f"\n{text}"
            if parts and used + len(span) > GENERATION_BUDGET:
                break
            parts.append(span)
            used += len(span)
        return "\n\n".join(parts)


class RemoteLlmProvider:
    """HTTP JSON slot for a hosted LLM; output citations are post-checked by
    the pipeline and never trusted as-is."""

    name = "remote_llm"

    def __init__(self, endpoint: str, template: str, credential: str = "", timeout: float = 10.0):
        self.endpoint = endpoint
        self.template = template
        self.credential = credential
        self.timeout = timeout

    def generate(self, context: RetrievedContext, query: str, language: str) -> str:
        prompt = self.template.format(
            query=query, context=context.assembled_context, language=language
        )
        req = urllib.request.Request(
            self.endpoint,
            data=json.dumps({"prompt": prompt}).encode("utf-8"),
            headers={"Content-Type": "application/json"},
        )
        if self.credential:
            req.add_header("Authorization", f"Bearer {self.credential}")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.loads(resp.read().decode("utf-8"))["text"]
        except TimeoutError as exc:
            raise ProviderTimeout(f"generation provider timed out: {exc}") from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, TimeoutError):
                raise ProviderTimeout(f"generation provider timed out: {exc}") from exc
            raise ProviderUnavailable(f"generation provider failed: {exc}") from exc
        except (OSError, ValueError, KeyError) as exc:
            raise ProviderUnavailable(f"generation provider failed: {exc}") from exc


def shipped_prompt_template(name: str = "answer") -> str:
    return (resources.files("devicedesk.data") / "prompts" / f"{name}.txt").read_text("utf-8")


def generate(context: RetrievedContext, query: str, provider, language: str = "en") -> str:
    """Run one generation provider over an assembled context."""
    return provider.generate(context, query, language)


def localize(answer: RagAnswer, target: str, provider=None) -> RagAnswer:
    """Translate an answer in place via the provider; the identity default
    keeps the source language and flags the answer untranslated."""
    if answer.language == target:
        return answer
    provider = provider or IdentityTranslation()
    translated = provider.translate(answer.text, answer.language, target)
    if translated is None:
        if "untranslated" not in answer.flags:
            answer.flags.append("untranslated")
        return answer
    answer.text = translated
    answer.language = target
    return answer


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


class RagPipeline:
    def __init__(
        self,
        deployment,
        provider=None,
        translation=None,
        tau_ground: float = DEFAULT_TAU_GROUND,
        default_k: int = DEFAULT_K,
        refusals: RefusalTemplates | None = None,
    ):
        self.dep = deployment
        self.provider = provider or ExtractiveProvider()
        self.translation = translation or IdentityTranslation()
        self.tau_ground = tau_ground
        self.default_k = default_k
        self.refusals = refusals or RefusalTemplates.shipped()

    # -- helpers -----------------------------------------------------------------

    def _segments_for(self, intent: str, requested: list[str] | None):
        names = requested or INTENT_SEGMENTS.get(intent, INTENT_SEGMENTS["unknown"])
        found = [self.dep.segments[n] for n in names if n in self.dep.segments]
        if not found:
            if not self.dep.segments:
                raise StoreUnavailable("no stores loaded")
            # e.g. forum_search before any promotion built the community
            # segment: legitimate, answered with a refusal (nothing to cite)
            return []
        return found

    def _refusal(self, kind: str, language: str, intent: str, confidence: float,
                 retrieved: list[str], flags: list[str], payload=None, **fmt) -> RagAnswer:
        return RagAnswer(
            text=self.refusals.get(kind, language, **fmt),
            citations=[],
            grounded=False,
            confidence=confidence,
            latency_ms=0.0,
            language=language,
            intent=intent,
            flags=flags,
            retrieved=retrieved,
            tool_payload=payload,
        )

    def _retrieve(self, text: str, intent: str, request: QueryRequest):
        segments = self._segments_for(intent, request.requested_segments)
        qv = self.dep.embedder.embed(text)
        live = [s for s in segments if len(s) > 0]
        if not qv.normalized or not live:
            return []
        return search_multi(live, qv, k=request.k or self.default_k)

    def _grounded_answer(
        self, request: QueryRequest, intent: str, hits,
        flags: list[str], payload=None, confidence=None,
    ) -> RagAnswer:
        language = self.dep.corpus_language
        context = RetrievedContext.from_hits(hits, self.dep.chunks)
        degraded = False
        try:
            text = generate(context, request.text, self.provider, language)
        except ProviderTimeout:
            text = generate(context, request.text, ExtractiveProvider(), language)
            degraded = True
        citations = [h.chunk_id for h in hits]
        if degraded:
            flags = flags + ["degraded"]
        elif self.provider.name == "remote_llm":
            text, citations, flags = self._post_check(text, hits, flags)
            if not citations:
                return self._refusal(
                    "grounding", language, intent, hits[0].score if hits else 0.0,
                    [h.chunk_id for h in hits], flags + ["ungrounded_generation"], payload,
                )
        return RagAnswer(
            text=text,
            citations=citations,
            grounded=True,
            confidence=hits[0].score if confidence is None else confidence,
            latency_ms=0.0,
            language=language,
            intent=intent,
            flags=flags,
            retrieved=[h.chunk_id for h in hits],
            tool_payload=payload,
        )

    @staticmethod
    def _post_check(text: str, hits, flags: list[str]):
        """Never trust provider citations: strip ids not in the context."""
        valid = {h.chunk_id for h in hits}
        cited = _CITE_MARK.findall(text)
        bogus = [c for c in cited if c not in valid]
        for c in bogus:
            text = text.replace(f"[{c}]", "")
        if bogus:
            flags = flags + ["stripped_citations"]
        kept = []
        for c in cited:
            if c in valid and c not in kept:
                kept.append(c)
        return text, kept, flags

    # -- tool paths --------------------------------------------------------------

    def _answer_error_code(self, request: QueryRequest, decision, language: str) -> RagAnswer:
        code = decision.slots["code"]
        model = request.device_model or self.dep.default_model
        catalog = self.dep.catalogs.get(model)
        answer = lookup_error_code(
            code,
            catalog,
            error_segment=self.dep.segments.get("error_catalog"),
            embedder=self.dep.embedder,
            query_text=request.text,
            k=request.k or self.default_k,
        )
        payload = answer.to_payload()
        if answer.status == "exact":
            entry = answer.entry
            lines = [f"{entry.code}: {entry.description}"]
            if entry.causes:
                lines.append("Possible causes: " + "; ".join(entry.causes))
            if entry.corrective_actions:
                lines.append("Corrective actions:")
                lines.extend(f"{i}. {a}" for i, a in enumerate(entry.corrective_actions, 1))
            lines.append(f"[{entry.source_chunk_id}]")
            return RagAnswer(
                text="\n".join(lines),
                citations=[entry.source_chunk_id],
                grounded=True,
                confidence=1.0,
                latency_ms=0.0,
                language=self.dep.corpus_language,
                intent="error_code_lookup",
                retrieved=[entry.source_chunk_id],
                tool_payload=payload,
            )
        if answer.status == "disambiguation":
            lines = [f"No exact match for {answer.query_code}. Did you mean:"]
            lines += [f"- {e.code}: {e.description} [{e.source_chunk_id}]" for e in answer.suggestions]
            cites = [e.source_chunk_id for e in answer.suggestions]
            return RagAnswer(
                text="\n".join(lines),
                citations=cites,
                grounded=True,
                confidence=0.0,
                latency_ms=0.0,
                language=self.dep.corpus_language,
                intent="error_code_lookup",
                flags=["disambiguation"],
                retrieved=cites,
                tool_payload=payload,
            )
        # not_found: related hits count only when they clear the grounding bar
        related = [h for h in answer.related if h.score >= self.tau_ground]
        if related:
            return self._grounded_answer(
                request, "error_code_lookup", related,
                flags=["not_found", "related_information"], payload=payload,
            )
        top = answer.related[0].score if answer.related else 0.0
        return self._refusal(
            "code_not_found", language, "error_code_lookup", top,
            [h.chunk_id for h in answer.related], ["not_found"], payload, code=answer.query_code,
        )

    def _tool_payload(self, intent: str, request: QueryRequest) -> dict | None:
        model = request.device_model or self.dep.default_model
        if intent == "self_test":
            runner = self.dep.selftest
            available = bool(runner) and model in runner.models
            payload = {"tool": "self_test", "device_model": model, "available": available}
            if available:
                payload["start_endpoint"] = f"/v1/selftest/{model}/start"
            return payload
        if intent == "maintenance_schedule":
            profile = self.dep.profiles.get(model)
            payload = {"tool": "maintenance_schedule", "device_model": model,
                       "available": profile is not None}
            if profile is not None:
                payload["plan_endpoint"] = f"/v1/maintenance/{model}/plan"
                payload["ics_endpoint"] = f"/v1/maintenance/{model}/plan.ics"
            return payload
        if intent == "log_analysis":
            return {"tool": "log_analysis", "upload_endpoint": "/v1/logs/analyze",
                    "line_format": "<ISO-8601 timestamp> <SEVERITY> [<code>] <message>"}
        return None

    # -- entry point -------------------------------------------------------------

    def answer_query(self, request: QueryRequest) -> RagAnswer:
        t0 = time.perf_counter()
        if not request.text or not request.text.strip():
            raise EmptyQuery("query text is empty")
        # generated content is in the corpus language; refusal templates are
        # natively localized; localize() bridges the gap at the end
        target_lang = request.language or self.dep.detector.detect(request.text).tag

        decision = self.dep.router.classify(
            request.text,
            catalog_codes=self.dep.catalog_codes(request.device_model),
            known_models=set(self.dep.device_models),
        )

        if decision.intent == "error_code_lookup":
            answer = self._answer_error_code(request, decision, target_lang)
        else:
            intent = decision.intent
            flags = ["low_confidence"] if intent == "unknown" else []
            payload = self._tool_payload(intent, request)
            hits = self._retrieve(request.text, intent, request)
            top = hits[0].score if hits else 0.0
            if not hits or top < self.tau_ground:
                answer = self._refusal(
                    "grounding", target_lang, intent, top,
                    [h.chunk_id for h in hits], flags, payload,
                )
            else:
                answer = self._grounded_answer(request, intent, hits, flags, payload)

        if answer.language != target_lang:
            answer = localize(answer, target_lang, self.translation)
        answer.latency_ms = (time.perf_counter() - t0) * 1000.0
        return answer
