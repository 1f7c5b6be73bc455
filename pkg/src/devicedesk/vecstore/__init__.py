"""Segmented persistent vector store with exact flat search and native HNSW."""

from .hnsw import HnswIndex, HnswParams
from .segment import MAGIC, SearchHit, StoreSegment, search_multi

__all__ = ["HnswIndex", "HnswParams", "MAGIC", "SearchHit", "StoreSegment", "search_multi"]
