"""Document parsing, chunking, and error-catalog ingestion."""

from .catalog import (
    CatalogParseResult,
    ErrorCodeEntry,
    MalformedRow,
    normalize_code,
    parse_error_catalog,
)
from .chunking import (
    Chunk,
    ChunkingPolicy,
    chunk_document,
    embedding_text_for_chunk,
    make_chunk_id,
    reconstruct_body,
)
from .documents import DOC_CLASSES, Heading, SourceDocument, extract_outline, parse_document
from .manifest import ManifestEntry, load_manifest

__all__ = [
    "CatalogParseResult",
    "Chunk",
    "ChunkingPolicy",
    "DOC_CLASSES",
    "ErrorCodeEntry",
    "Heading",
    "MalformedRow",
    "ManifestEntry",
    "SourceDocument",
    "chunk_document",
    "embedding_text_for_chunk",
    "extract_outline",
    "load_manifest",
    "make_chunk_id",
    "normalize_code",
    "parse_document",
    "parse_error_catalog",
    "reconstruct_body",
]
