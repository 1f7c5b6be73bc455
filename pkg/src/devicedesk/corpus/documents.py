"""Source document parsing: heading outline extraction and identity."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import EmptyDocument, InvalidLanguageTag

DOC_CLASSES = ("user_manual", "service_manual", "error_catalog", "community")

_ATX_HEADING = re.compile(r"^(#{1,6})\s+(.+?)\s*#*\s*$")
_SETEXT_EQ = re.compile(r"^={3,}\s*$")
_SETEXT_DASH = re.compile(r"^-{3,}\s*$")
_LANG_TAG = re.compile(r"^[A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*$")
_SLUG_JUNK = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class Heading:
    level: int
    title: str
    start: int  # offset of the heading line's first char in body
    body_start: int  # offset just past the heading line (and any underline)


@dataclass
class SourceDocument:
    doc_id: str
    device_model: str
    doc_class: str
    language: str
    title: str
    body: str
    ingested_at: datetime
    outline: list[Heading] = field(default_factory=list)


def _slug(text: str) -> str:
    s = _SLUG_JUNK.sub("-", text.lower()).strip("-")
    return s or "doc"


def extract_outline(body: str) -> list[Heading]:
    """Markdown-style headings: ATX (# runs) and setext underlines (===, ---)."""
    headings: list[Heading] = []
    offset = 0
    lines = body.split("\n")
    prev_line = ""
    prev_offset = 0
    for line in lines:
        line_end = offset + len(line) + 1  # +1 for the split newline
        m = _ATX_HEADING.match(line)
        if m:
            headings.append(Heading(len(m.group(1)), m.group(2), offset, min(line_end, len(body))))
        elif prev_line.strip() and not _ATX_HEADING.match(prev_line):
            if _SETEXT_EQ.match(line):
                headings.append(Heading(1, prev_line.strip(), prev_offset, min(line_end, len(body))))
            elif _SETEXT_DASH.match(line):
                headings.append(Heading(2, prev_line.strip(), prev_offset, min(line_end, len(body))))
        prev_line = line
        prev_offset = offset
        offset = line_end
    return headings


def parse_document(raw: str, meta: dict) -> SourceDocument:
    """Parse raw text plus manifest metadata into a SourceDocument.

    ``meta`` requires device_model, doc_class, language, title; an optional
    doc_id overrides the generated one (ingestion uses the manifest file stem
    so ids are stable across runs).
    """
    if raw is None or not raw.strip():
        raise EmptyDocument("document body is empty or whitespace-only")
    language = meta.get("language", "en")
    if not _LANG_TAG.match(language):
        raise InvalidLanguageTag(f"malformed language tag: {language!r}")
    doc_class = meta["doc_class"]
    if doc_class not in DOC_CLASSES:
        raise ValueError(f"unknown doc_class: {doc_class!r}")
    title = meta.get("title", "")
    device_model = meta.get("device_model", "")
    doc_id = meta.get("doc_id")
    if not doc_id:
        digest = hashlib.sha256(f"{device_model}\n{raw}".encode("utf-8")).hexdigest()[:8]
        doc_id = f"{_slug(title)}-{digest}"
    return SourceDocument(
        doc_id=doc_id,
        device_model=device_model,
        doc_class=doc_class,
        language=language,
        title=title,
        body=raw,
        ingested_at=datetime.now(timezone.utc),
        outline=extract_outline(raw),
    )
