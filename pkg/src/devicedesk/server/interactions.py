"""Anonymized interaction logging.

Append-only JSONL through a single serialized appender. Technician/session
identifiers are stored only as salted hashes; no query text, no credentials,
no patient data ever lands here.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from pathlib import Path


class InteractionLog:
    def __init__(self, path: str | Path, salt: str):
        self.path = Path(path)
        self.salt = salt
        self._lock = threading.Lock()

    def _hash(self, value: str) -> str:
        return hashlib.sha256(f"{self.salt}:{value}".encode()).hexdigest()[:16]

    def record(
        self,
        session_id: str,
        intent: str,
        segments: list[str],
        grounded: bool,
        latency_ms: float,
        answer_id: str,
    ) -> None:
        rec = {
            "ts": time.time(),
            "session": self._hash(session_id),
            "intent": intent,
            "segments": segments,
            "grounded": grounded,
            "latency_ms": round(latency_ms, 3),
            "answer_id": answer_id,
        }
        line = json.dumps(rec, sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def export(self) -> list[dict]:
        if not self.path.exists():
            return []
        return [
            json.loads(line)
            for line in self.path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
