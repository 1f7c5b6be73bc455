"""Device log parsing and frequency analysis.

Reference line grammar ("standard"):
    <ISO-8601 timestamp> <SEVERITY> [<code>] <message>
with the bracketed code optional. Parsing is tolerant: malformed lines are
recorded by number and skipped; unknown severity words default to info with
a flag. Log replay from files is the simulation layer standing in for live
device feeds.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import EmptyCode, UnknownFormatSpec
from .error_lookup import ErrorCodeCatalog
from ..corpus import normalize_code

SEVERITIES = ("debug", "info", "warning", "error", "fatal")

_ALIASES = {"warn": "warning", "err": "error", "critical": "fatal", "crit": "fatal"}

_LINE_FORMATS = {
    "standard": re.compile(
        r"^(?P<ts>\S+)\s+(?P<sev>[A-Za-z]+)\s+(?:\[(?P<code>[^\]]*)\]\s*)?(?P<msg>.*)$"
    )
}


@dataclass
class LogEntry:
    timestamp: datetime
    severity: str
    code: str | None
    message: str
    line_no: int
    severity_defaulted: bool = False


@dataclass
class ParsedLog:
    entries: list[LogEntry]
    malformed: list[int]
    total_lines: int


@dataclass
class LogReport:
    total_lines: int
    parsed: int
    malformed: list[int]
    counts_by_severity: dict
    top_codes: list  # (code, count, catalog_match)
    time_range: tuple | None

    def to_payload(self) -> dict:
        return {
            "total_lines": self.total_lines,
            "parsed": self.parsed,
            "malformed_lines": self.malformed,
            "counts_by_severity": self.counts_by_severity,
            "top_codes": [
                {"code": c, "count": n, "catalog_match": m} for c, n, m in self.top_codes
            ],
            "time_range": [t.isoformat() for t in self.time_range] if self.time_range else None,
        }


def _parse_timestamp(raw: str) -> datetime | None:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        return None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_log(text: str, format_spec: str = "standard") -> ParsedLog:
    pattern = _LINE_FORMATS.get(format_spec)
    if pattern is None:
        raise UnknownFormatSpec(f"no log grammar named {format_spec!r}")
    entries: list[LogEntry] = []
    malformed: list[int] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            malformed.append(line_no)
            continue
        m = pattern.match(line)
        if not m:
            malformed.append(line_no)
            continue
        ts = _parse_timestamp(m.group("ts"))
        if ts is None:
            malformed.append(line_no)
            continue
        sev_raw = m.group("sev").lower()
        sev = _ALIASES.get(sev_raw, sev_raw)
        defaulted = sev not in SEVERITIES
        if defaulted:
            sev = "info"
        code = None
        if m.group("code"):
            try:
                code = normalize_code(m.group("code"))
            except EmptyCode:
                code = None
        entries.append(
            LogEntry(
                timestamp=ts,
                severity=sev,
                code=code,
                message=m.group("msg").strip(),
                line_no=line_no,
                severity_defaulted=defaulted,
            )
        )
    return ParsedLog(entries=entries, malformed=malformed, total_lines=len(lines))


def analyze_log(parsed: ParsedLog, catalog: ErrorCodeCatalog | None = None) -> LogReport:
    counts = Counter(e.severity for e in parsed.entries)
    code_counts = Counter(e.code for e in parsed.entries if e.code)
    known = catalog.codes if catalog is not None else set()
    top_codes = [
        (code, count, code in known)
        for code, count in sorted(code_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    stamps = [e.timestamp for e in parsed.entries]
    return LogReport(
        total_lines=parsed.total_lines,
        parsed=len(parsed.entries),
        malformed=list(parsed.malformed),
        counts_by_severity={s: counts.get(s, 0) for s in SEVERITIES if counts.get(s, 0)},
        top_codes=top_codes,
        time_range=(min(stamps), max(stamps)) if stamps else None,
    )
