"""Corpus manifest: one record per document.

    path | device_model | doc_class | language | title

Paths are resolved relative to the manifest file. `#` comments allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import EmptyManifest


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    device_model: str
    doc_class: str
    language: str
    title: str

    @property
    def doc_id(self) -> str:
        return self.path.stem


def load_manifest(manifest_path: str | Path) -> list[ManifestEntry]:
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    entries = []
    for line_no, line in enumerate(manifest_path.read_text(encoding="utf-8").split("\n"), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [p.strip() for p in stripped.split("|")]
        if len(parts) != 5:
            raise ValueError(f"{manifest_path}:{line_no}: expected 5 '|'-separated fields")
        path, device_model, doc_class, language, title = parts
        entries.append(
            ManifestEntry(
                path=(base / path).resolve(),
                device_model=device_model,
                doc_class=doc_class,
                language=language,
                title=title,
            )
        )
    if not entries:
        raise EmptyManifest(f"manifest {manifest_path} lists no documents")
    return entries
