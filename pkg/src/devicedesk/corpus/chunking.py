"""Heading-first recursive chunking.

Chunks are literal substrings of the document body (char_span is exact), so
sorting by ordinal and dropping the declared overlaps reconstructs the body
byte for byte. No chunk ever crosses a top-level heading boundary; inside a
section, cuts prefer paragraph breaks, then sentence ends, then a hard cut.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field

from .documents import SourceDocument

_SENTENCE_END = re.compile(r"[.!?]['\")\]]*\s")


@dataclass(frozen=True)
class ChunkingPolicy:
    target_size: int = 1200
    overlap: int = 200
    min_size: int = 200
    split_levels: tuple = ("heading", "paragraph", "sentence")

    def __post_init__(self):
        if not (0 <= self.overlap < self.target_size):
            raise ValueError("require 0 <= overlap < target_size")
        if self.min_size > self.target_size:
            raise ValueError("require min_size <= target_size")


@dataclass
class Chunk:
    chunk_id: str
    doc_id: str
    doc_class: str
    ordinal: int
    heading_path: list[str]
    text: str
    char_span: tuple[int, int]


def make_chunk_id(doc_id: str, ordinal: int) -> str:
    return f"{doc_id}#{ordinal:04d}"


def _top_level_sections(doc: SourceDocument) -> list[tuple[int, int]]:
    n = len(doc.body)
    tops = [h.start for h in doc.outline if h.level == 1]
    bounds = []
    if not tops or tops[0] > 0:
        bounds.append(0)
    bounds.extend(tops)
    sections = []
    for i, s in enumerate(bounds):
        e = bounds[i + 1] if i + 1 < len(bounds) else n
        if s < e:
            sections.append((s, e))
    return sections


def _heading_lineage(doc: SourceDocument):
    """Precompute (position, path) change points for heading lineage lookup."""
    changes: list[tuple[int, list[str]]] = [(0, [])]
    stack: list = []
    for h in doc.outline:
        while stack and stack[-1].level >= h.level:
            stack.pop()
        stack.append(h)
        changes.append((h.start, [x.title for x in stack]))
    return changes


def _lineage_at(changes, pos: int) -> list[str]:
    idx = bisect_right(changes, pos, key=lambda c: c[0]) - 1
    return list(changes[max(idx, 0)][1])


def _find_cut(body: str, lo: int, hi: int, levels) -> int:
    """Best cut position in (lo, hi]; prefers paragraph breaks, then sentence
    ends, then bare line breaks, then a hard cut."""
    if "paragraph" in levels:
        idx = body.rfind("\n\n", lo, hi)
        if idx >= lo:
            return idx + 2
    if "sentence" in levels:
        last = None
        for m in _SENTENCE_END.finditer(body, lo, hi):
            last = m
        if last is not None and lo < last.end() <= hi:
            return last.end()
        idx = body.rfind("\n", lo, hi)
        if idx >= lo:
            return idx + 1
    return hi


def chunk_document(doc: SourceDocument, policy: ChunkingPolicy | None = None) -> list[Chunk]:
    policy = policy or ChunkingPolicy()
    body = doc.body
    changes = _heading_lineage(doc)
    spans: list[tuple[int, int]] = []

    for sec_start, sec_end in _top_level_sections(doc):
        pos = sec_start
        while pos < sec_end:
            remaining = sec_end - pos
            if remaining <= policy.target_size:
                spans.append((pos, sec_end))
                break
            lo = pos + max(policy.min_size, policy.overlap + 1)
            hi = pos + policy.target_size
            cut = _find_cut(body, lo, hi, policy.split_levels)
            if sec_end - cut < policy.min_size:
                spans.append((pos, sec_end))  # absorb undersized remainder
                break
            spans.append((pos, cut))
            pos = cut - policy.overlap

    chunks = []
    for ordinal, (s, e) in enumerate(spans):
        chunks.append(
            Chunk(
                chunk_id=make_chunk_id(doc.doc_id, ordinal),
                doc_id=doc.doc_id,
                doc_class=doc.doc_class,
                ordinal=ordinal,
                heading_path=_lineage_at(changes, s),
                text=body[s:e],
                char_span=(s, e),
            )
        )
    return chunks


def embedding_text_for_chunk(chunk: Chunk) -> str:
    """Text actually embedded for a chunk: heading lineage prefixed so
    section-titled topics stay retrievable from short queries."""
    lineage = " > ".join(chunk.heading_path)
    return f"{lineage}\n{chunk.text}" if lineage else chunk.text


def reconstruct_body(chunks: list[Chunk]) -> str:
    """Concatenate chunk texts minus overlaps; inverse of chunk_document."""
    ordered = sorted(chunks, key=lambda c: c.ordinal)
    parts = []
    prev_end = 0
    for c in ordered:
        s, e = c.char_span
        parts.append(c.text[prev_end - s :] if s < prev_end else c.text)
        prev_end = e
    return "".join(parts)
