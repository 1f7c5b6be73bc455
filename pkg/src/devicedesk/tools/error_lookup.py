"""Three-tier error-code lookup.

Tier 1 is an exact match on the normalized code and is the only tier allowed
to return a definitive answer. Tier 2 surfaces edit-distance-1 neighbors as a
disambiguation list (transcription slips like O/0). Tier 3 falls back to
vector search over the error-catalog segment as related information.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import ErrorCodeEntry, normalize_code
from ..errors import NoCatalogLoaded
from ..vecstore import SearchHit, StoreSegment


def edit_distance(a: str, b: str, cap: int | None = None) -> int:
    """Levenshtein distance; stops early when a row minimum exceeds ``cap``."""
    if a == b:
        return 0
    if len(a) > len(b):
        a, b = b, a
    prev = list(range(len(a) + 1))
    for j, cb in enumerate(b, start=1):
        cur = [j]
        for i, ca in enumerate(a, start=1):
            cur.append(min(prev[i] + 1, cur[i - 1] + 1, prev[i - 1] + (ca != cb)))
        if cap is not None and min(cur) > cap:
            return cap + 1
        prev = cur
    return prev[-1]


class ErrorCodeCatalog:
    """Normalized code -> entry map for one device model."""

    def __init__(self, device_model: str, entries: list[ErrorCodeEntry]):
        self.device_model = device_model
        self._by_code = {e.code: e for e in entries}

    def __len__(self) -> int:
        return len(self._by_code)

    def get(self, code: str) -> ErrorCodeEntry | None:
        return self._by_code.get(code)

    def remove(self, code: str) -> None:
        self._by_code.pop(code, None)

    @property
    def codes(self) -> set[str]:
        return set(self._by_code)

    def entries(self) -> list[ErrorCodeEntry]:
        return [self._by_code[c] for c in sorted(self._by_code)]


@dataclass
class ErrorCodeAnswer:
    status: str  # exact | disambiguation | not_found
    query_code: str
    entry: ErrorCodeEntry | None = None
    suggestions: list[ErrorCodeEntry] = field(default_factory=list)
    related: list[SearchHit] = field(default_factory=list)

    def to_payload(self) -> dict:
        payload = {"status": self.status, "query_code": self.query_code}
        if self.entry is not None:
            payload["entry"] = self.entry.to_dict()
        if self.suggestions:
            payload["suggestions"] = [e.to_dict() for e in self.suggestions]
        if self.related:
            payload["related"] = [
                {"chunk_id": h.chunk_id, "score": h.score, "segment": h.segment_name}
                for h in self.related
            ]
        return payload


def lookup_error_code(
    code_raw: str,
    catalog: ErrorCodeCatalog | None,
    error_segment: StoreSegment | None = None,
    embedder=None,
    query_text: str | None = None,
    k: int = 5,
) -> ErrorCodeAnswer:
    if catalog is None:
        raise NoCatalogLoaded("no error catalog loaded for this device")
    code = normalize_code(code_raw)

    entry = catalog.get(code)
    if entry is not None:
        return ErrorCodeAnswer(status="exact", query_code=code, entry=entry)

    near = [c for c in catalog.codes if edit_distance(code, c, cap=1) <= 1]
    if near:
        suggestions = [catalog.get(c) for c in sorted(near)]
        return ErrorCodeAnswer(status="disambiguation", query_code=code, suggestions=suggestions)

    related: list[SearchHit] = []
    if error_segment is not None and len(error_segment) > 0 and embedder is not None:
        qv = embedder.embed(query_text or code_raw)
        if qv.normalized:
            related = error_segment.search(qv, k=k, mode="flat")
    return ErrorCodeAnswer(status="not_found", query_code=code, related=related)
