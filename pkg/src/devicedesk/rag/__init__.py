"""Retrieval-augmented answering: pipeline, generation providers, language."""

from .language import IdentityTranslation, LanguageDetector, LanguageGuess
from .pipeline import (
    DEFAULT_TAU_GROUND,
    ExtractiveProvider,
    GenerationProviderSpec,
    INTENT_SEGMENTS,
    QueryRequest,
    RagAnswer,
    RagPipeline,
    RefusalTemplates,
    RemoteLlmProvider,
    RetrievedContext,
    generate,
    localize,
)

__all__ = [
    "DEFAULT_TAU_GROUND",
    "ExtractiveProvider",
    "GenerationProviderSpec",
    "INTENT_SEGMENTS",
    "IdentityTranslation",
    "LanguageDetector",
    "LanguageGuess",
    "QueryRequest",
    "RagAnswer",
    "RagPipeline",
    "RefusalTemplates",
    "RemoteLlmProvider",
    "RetrievedContext",
    "generate",
    "localize",
]
