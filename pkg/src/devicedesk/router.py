"""Intent classification and slot extraction for tool dispatch.

Rule-first: any token that normalizes to a known catalog code (or looks like
a device error code) forces error_code_lookup with confidence 1.0. Otherwise
the query embedding is scored against per-intent exemplar centroids loaded
from a versioned exemplar file; below-threshold queries come back as
``unknown`` and fall through to the best-effort instructional path.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import normalize_code
from .embedding import cosine_similarity
from .errors import EmptyCode, EmptyQuery, TooFewExemplars

INTENTS = (
    "error_code_lookup",
    "instructional",
    "log_analysis",
    "self_test",
    "maintenance_schedule",
    "forum_search",
    "unknown",
)

DEFAULT_TAU_INTENT = 0.15

# token that plausibly is a printed device code: short letter prefix, a digit
# run (tolerating O/I/l transcription slips), optional short suffix
# ("E-042", "ERR17", "F-3A", "E-O42"); extract_code additionally requires at
# least one true digit so ordinary words ("tool") never match
_CODE_TOKEN = re.compile(r"^[A-Za-z]{1,3}[-_.]?[0-9OIl]{1,4}(?:[-_.]?[A-Za-z0-9]{1,2})?$")
_WORD = re.compile(r"[A-Za-z0-9][\w.\-]*")


@dataclass
class RoutingDecision:
    intent: str
    confidence: float
    slots: dict = field(default_factory=dict)
    matched_exemplar_id: str | None = None


class IntentRouter:
    def __init__(self, embedder, tau_intent: float = DEFAULT_TAU_INTENT):
        self.embedder = embedder
        self.tau_intent = tau_intent
        self._exemplars: dict[str, list[str]] = {}
        self._centroids: dict[str, np.ndarray] = {}

    # -- exemplar management ---------------------------------------------------

    def register_exemplars(self, intent: str, phrases: list[str]) -> None:
        if intent not in INTENTS or intent == "unknown":
            raise ValueError(f"cannot register exemplars for intent {intent!r}")
        if len(phrases) < 3:
            raise TooFewExemplars(f"intent {intent} has {len(phrases)} exemplars, need >= 3")
        vecs = np.stack([self.embedder.embed(p).values.astype(np.float64) for p in phrases])
        centroid = vecs.mean(axis=0)
        norm = float(np.linalg.norm(centroid))
        if norm > 0:
            centroid /= norm
        self._exemplars[intent] = list(phrases)
        self._centroids[intent] = centroid

    def load_exemplar_file(self, path: str | Path) -> None:
        """One record per line: ``intent | phrase``; replaces current sets."""
        grouped: dict[str, list[str]] = {}
        for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            intent, _, phrase = stripped.partition("|")
            intent, phrase = intent.strip(), phrase.strip()
            if not phrase:
                raise ValueError(f"{path}:{line_no}: expected 'intent | phrase'")
            grouped.setdefault(intent, []).append(phrase)
        self._exemplars.clear()
        self._centroids.clear()
        for intent, phrases in grouped.items():
            self.register_exemplars(intent, phrases)

    def centroid(self, intent: str) -> np.ndarray:
        return self._centroids[intent]

    @property
    def registered_intents(self) -> list[str]:
        return list(self._centroids)

    # -- classification ----------------------------------------------------------

    def extract_code(self, query: str, catalog_codes: set[str], known_models: set[str] = frozenset()):
        """First catalog hit wins; otherwise first token shaped like a code.
        Tokens matching a known device model are never treated as codes."""
        excluded = {m.upper() for m in known_models}
        tokens = _WORD.findall(query)
        candidates = tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]
        pattern_hit = None
        for tok in candidates:
            try:
                norm = normalize_code(tok)
            except EmptyCode:
                continue
            if norm in excluded:
                continue
            if norm in catalog_codes:
                return norm, "catalog"
            if (
                pattern_hit is None
                and " " not in tok
                and _CODE_TOKEN.match(tok)
                and any(ch.isdigit() for ch in tok)
            ):
                pattern_hit = norm
        if pattern_hit is not None:
            return pattern_hit, "pattern"
        return None, None

    def classify(
        self,
        query: str,
        catalog_codes: set[str] = frozenset(),
        known_models: set[str] = frozenset(),
    ) -> RoutingDecision:
        if not query or not query.strip():
            raise EmptyQuery("query is empty")

        code, rule = self.extract_code(query, catalog_codes, known_models)
        if code is not None:
            return RoutingDecision(
                intent="error_code_lookup",
                confidence=1.0,
                slots={"code": code},
                matched_exemplar_id=f"rule:{rule}",
            )

        if not self._centroids:
            return RoutingDecision(intent="unknown", confidence=0.0)

        qv = self.embedder.embed(query)
        if not qv.normalized:
            return RoutingDecision(intent="unknown", confidence=0.0)
        best_intent, best_score = "unknown", -1.0
        for intent, centroid in self._centroids.items():
            score = cosine_similarity(qv.values, centroid.astype(np.float32))
            if score > best_score:
                best_intent, best_score = intent, score
        if best_score < self.tau_intent:
            return RoutingDecision(intent="unknown", confidence=max(best_score, 0.0))
        phrases = self._exemplars[best_intent]
        nearest = max(
            range(len(phrases)),
            key=lambda i: cosine_similarity(qv, self.embedder.embed(phrases[i])),
        )
        return RoutingDecision(
            intent=best_intent,
            confidence=best_score,
            matched_exemplar_id=f"{best_intent}[{nearest}]",
        )
