"""Error-code catalog parsing and code normalization.

Catalog body format, one record per line:
    raw_code | description | semicolon-separated causes | semicolon-separated corrective actions
Lines starting with `#` are comments. Malformed rows are collected and
reported without aborting; duplicate codes after normalization abort the
ingest (lookup precision requires an unambiguous code -> entry map).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import DuplicateCode, EmptyCode
from .chunking import Chunk, ChunkingPolicy, chunk_document
from .documents import SourceDocument

_SEPARATOR_RUN = re.compile(r"[\s_.\-]+")


def normalize_code(raw: str) -> str:
    """Uppercase, separator runs (space/underscore/dot/dash) collapsed to a
    single dash, outer separators stripped. Idempotent."""
    if raw is None or not raw.strip():
        raise EmptyCode("error code is empty")
    s = _SEPARATOR_RUN.sub("-", raw.strip().upper()).strip("-")
    if not s:
        raise EmptyCode(f"error code {raw!r} contains only separators")
    return s


@dataclass
class ErrorCodeEntry:
    code: str
    raw_code: str
    description: str
    causes: list[str]
    corrective_actions: list[str]
    source_chunk_id: str

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "raw_code": self.raw_code,
            "description": self.description,
            "causes": self.causes,
            "corrective_actions": self.corrective_actions,
            "source_chunk_id": self.source_chunk_id,
        }


@dataclass
class MalformedRow:
    line_no: int
    reason: str


@dataclass
class CatalogParseResult:
    entries: list[ErrorCodeEntry]
    malformed: list[MalformedRow] = field(default_factory=list)


def _chunk_for_row(chunks: list[Chunk], start: int, end: int) -> str:
    """Chunk fully containing the row; falls back to the one holding its start
    (a row longer than the chunk overlap can straddle a cut)."""
    fallback = ""
    for c in chunks:
        s, e = c.char_span
        if s <= start < e:
            if end <= e:
                return c.chunk_id
            if not fallback:
                fallback = c.chunk_id
    return fallback or (chunks[-1].chunk_id if chunks else "")


def parse_error_catalog(
    doc: SourceDocument,
    chunks: list[Chunk] | None = None,
    policy: ChunkingPolicy | None = None,
) -> CatalogParseResult:
    if doc.doc_class != "error_catalog":
        raise ValueError(f"document {doc.doc_id} is not an error_catalog")
    if chunks is None:
        chunks = chunk_document(doc, policy)

    entries: list[ErrorCodeEntry] = []
    malformed: list[MalformedRow] = []
    seen: dict[str, int] = {}
    offset = 0
    for line_no, line in enumerate(doc.body.split("\n"), start=1):
        line_offset = offset
        offset += len(line) + 1
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) < 2 or not parts[0] or not parts[1]:
            malformed.append(MalformedRow(line_no, "expected 'code | description | causes | actions'"))
            continue
        raw_code, description = parts[0], parts[1]
        causes = [c.strip() for c in parts[2].split(";") if c.strip()] if len(parts) > 2 else []
        actions = [a.strip() for a in parts[3].split(";") if a.strip()] if len(parts) > 3 else []
        try:
            code = normalize_code(raw_code)
        except EmptyCode:
            malformed.append(MalformedRow(line_no, f"unusable code {raw_code!r}"))
            continue
        if code in seen:
            raise DuplicateCode(
                f"code {code} (line {line_no}) already defined at line {seen[code]}",
                code=code,
            )
        seen[code] = line_no
        entries.append(
            ErrorCodeEntry(
                code=code,
                raw_code=raw_code,
                description=description,
                causes=causes,
                corrective_actions=actions,
                source_chunk_id=_chunk_for_row(chunks, line_offset, line_offset + len(line)),
            )
        )
    return CatalogParseResult(entries=entries, malformed=malformed)
