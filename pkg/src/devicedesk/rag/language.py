"""Trigram-profile language identification and the translation provider slot.

Profiles are data files (JSON trigram frequency tables) shipped for English,
French, Swahili, and Kinyarwanda. Detection is a cosine between the text's
trigram counts and each profile; anything unrecognizable falls back to the
default tag with a flag. Translation is an interface with an identity
default: offline deployments return the source text marked untranslated.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

_WS = re.compile(r"\s+")
_MIN_CONFIDENCE = 0.08


def text_trigrams(text: str) -> Counter:
    canon = " " + _WS.sub(" ", text.strip().lower()) + " "
    return Counter(canon[i : i + 3] for i in range(len(canon) - 2))


@dataclass(frozen=True)
class LanguageGuess:
    tag: str
    confidence: float
    flagged: bool  # True when detection fell back to the default


class LanguageDetector:
    def __init__(self, profiles: dict[str, Counter], default: str = "en"):
        self.default = default
        self._norms = {}
        self._profiles = {}
        for tag, counts in profiles.items():
            c = Counter(counts)
            self._profiles[tag] = c
            self._norms[tag] = math.sqrt(sum(v * v for v in c.values()))

    @classmethod
    def from_dir(cls, directory: str | Path, default: str = "en") -> "LanguageDetector":
        profiles = {}
        for path in sorted(Path(directory).glob("*.json")):
            data = json.loads(path.read_text(encoding="utf-8"))
            profiles[data["tag"]] = Counter(data["trigrams"])
        if not profiles:
            raise FileNotFoundError(f"no language profiles in {directory}")
        return cls(profiles, default=default)

    @property
    def tags(self) -> list[str]:
        return sorted(self._profiles)

    def detect(self, text: str) -> LanguageGuess:
        grams = text_trigrams(text or "")
        if not grams:
            return LanguageGuess(self.default, 0.0, flagged=True)
        qnorm = math.sqrt(sum(v * v for v in grams.values()))
        best_tag, best = self.default, 0.0
        for tag, profile in self._profiles.items():
            dot = sum(c * profile.get(g, 0) for g, c in grams.items())
            score = dot / (qnorm * self._norms[tag]) if dot else 0.0
            if score > best:
                best_tag, best = tag, score
        if best < _MIN_CONFIDENCE:
            return LanguageGuess(self.default, best, flagged=True)
        return LanguageGuess(best_tag, best, flagged=False)


class IdentityTranslation:
    """Offline default: declines to translate (callers flag the answer)."""

    def translate(self, text: str, source: str, target: str) -> str | None:
        return None


class TranslationProvider:
    """Interface marker; real deployments may plug an HTTP translator here."""

    def translate(self, text: str, source: str, target: str) -> str | None:
        raise NotImplementedError
