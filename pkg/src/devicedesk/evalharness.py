"""Desk-scale evaluation suites and the benchmark report format.

Suites: error_code (every catalog code queried by its own string, correct
iff the returned description matches exactly), instructional (gold-chunk
containment in citations — a stated proxy for human judgment of answer
quality), ann_recall (HNSW vs flat oracle), latency (pipeline end-to-end).

Reports serialize as line-delimited JSON: one deterministic line per case,
then a summary line. Wall-clock fields (latencies, timestamps) are volatile
and excluded by strip_volatile() when comparing runs.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .rag.pipeline import QueryRequest, RagPipeline
from .vecstore import HnswIndex, HnswParams

VOLATILE_KEYS = ("latency_ms", "latency_p50", "latency_p95", "latency_mean", "generated_at")


@dataclass
class EvalCase:
    case_id: str
    query: str
    suite: str
    gold_code: str | None = None
    gold_chunk_ids: frozenset = frozenset()


@dataclass
class CaseOutcome:
    case_id: str
    correct: bool
    detail: dict = field(default_factory=dict)
    latency_ms: float = 0.0


@dataclass
class EvalReport:
    suite: str
    n_cases: int
    n_correct: int
    metric_name: str
    outcomes: list
    notes: str = ""
    latencies_ms: list = field(default_factory=list)

    @property
    def metric(self) -> float:
        return self.n_correct / self.n_cases if self.n_cases else 0.0

    def latency_percentiles(self) -> dict:
        if not self.latencies_ms:
            return {"latency_p50": 0.0, "latency_p95": 0.0, "latency_mean": 0.0}
        ordered = sorted(self.latencies_ms)
        p50 = ordered[int(0.50 * (len(ordered) - 1))]
        p95 = ordered[int(0.95 * (len(ordered) - 1))]
        return {
            "latency_p50": round(p50, 3),
            "latency_p95": round(p95, 3),
            "latency_mean": round(statistics.fmean(ordered), 3),
        }

    def to_jsonl(self, include_volatile: bool = True) -> str:
        lines = []
        for o in self.outcomes:
            rec = {"case_id": o.case_id, "correct": o.correct, **o.detail}
            if include_volatile:
                rec["latency_ms"] = round(o.latency_ms, 3)
            lines.append(json.dumps(rec, sort_keys=True))
        summary = {
            "suite": self.suite,
            "n_cases": self.n_cases,
            "n_correct": self.n_correct,
            "metric_name": self.metric_name,
            "metric": round(self.metric, 6),
            "notes": self.notes,
        }
        if include_volatile:
            summary.update(self.latency_percentiles())
            summary["generated_at"] = datetime.now(timezone.utc).isoformat()
        lines.append(json.dumps(summary, sort_keys=True))
        return "\n".join(lines) + "\n"

    def summary_table(self) -> str:
        pct = self.latency_percentiles()
        rows = [
            ("suite", self.suite),
            ("cases", str(self.n_cases)),
            ("correct", str(self.n_correct)),
            (self.metric_name, f"{self.metric:.4f}"),
            ("latency p50 (ms)", f"{pct['latency_p50']:.2f}"),
            ("latency p95 (ms)", f"{pct['latency_p95']:.2f}"),
            ("latency mean (ms)", f"{pct['latency_mean']:.2f}"),
        ]
        if self.notes:
            rows.append(("notes", self.notes))
        width = max(len(k) for k, _ in rows)
        bar = "-" * (width + 24)
        body = "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
        return f"{bar}\n{body}\n{bar}"


def strip_volatile(jsonl_text: str) -> str:
    """Remove wall-clock fields so two runs of one suite compare byte-equal."""
    out = []
    for line in jsonl_text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        for key in VOLATILE_KEYS:
            rec.pop(key, None)
        out.append(json.dumps(rec, sort_keys=True))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def run_error_code_eval(deployment, pipeline: RagPipeline) -> EvalReport:
    """Query every catalog code as "What does {code} mean?"; correct iff the
    answer carries the entry's description verbatim."""
    catalog = deployment.catalogs.get(deployment.default_model)
    if catalog is None:
        raise ValueError("no error catalog loaded")
    outcomes = []
    latencies = []
    n_correct = 0
    for entry in catalog.entries():
        answer = pipeline.answer_query(QueryRequest(text=f"What does {entry.raw_code} mean?"))
        payload = answer.tool_payload or {}
        got = (payload.get("entry") or {}).get("description")
        correct = answer.intent == "error_code_lookup" and got == entry.description
        n_correct += correct
        latencies.append(answer.latency_ms)
        outcomes.append(
            CaseOutcome(
                case_id=entry.code,
                correct=correct,
                detail={"status": payload.get("status"), "citations": answer.citations},
                latency_ms=answer.latency_ms,
            )
        )
    return EvalReport(
        suite="error_code",
        n_cases=len(outcomes),
        n_correct=n_correct,
        metric_name="precision",
        outcomes=outcomes,
        latencies_ms=latencies,
    )


def load_instructional_cases(path: str | Path, chunks: dict) -> list[EvalCase]:
    """Case file: ``case_id | query | gold_phrase``. The gold phrase resolves
    to the chunk(s) containing it verbatim — an oracle independent of any
    vector search (a phrase in a cut overlap may live in two chunks)."""
    cases = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [p.strip() for p in stripped.split("|")]
        if len(parts) != 3:
            raise ValueError(f"{path}:{line_no}: expected 'case_id | query | gold_phrase'")
        case_id, query, phrase = parts
        gold = frozenset(cid for cid, c in chunks.items() if phrase in c.text)
        cases.append(
            EvalCase(case_id=case_id, query=query, suite="instructional", gold_chunk_ids=gold)
        )
    return cases


def run_instructional_eval(cases: list[EvalCase], pipeline: RagPipeline) -> EvalReport:
    outcomes = []
    latencies = []
    n_correct = 0
    for case in cases:
        answer = pipeline.answer_query(QueryRequest(text=case.query))
        if not case.gold_chunk_ids:
            outcomes.append(
                CaseOutcome(case.case_id, False, {"missing_gold": True, "citations": answer.citations})
            )
            latencies.append(answer.latency_ms)
            continue
        correct = bool(case.gold_chunk_ids & set(answer.citations))
        n_correct += correct
        latencies.append(answer.latency_ms)
        outcomes.append(
            CaseOutcome(
                case.case_id,
                correct,
                {
                    "citations": answer.citations,
                    "gold": sorted(case.gold_chunk_ids),
                    "grounded": answer.grounded,
                    "intent": answer.intent,
                },
                latency_ms=answer.latency_ms,
            )
        )
    return EvalReport(
        suite="instructional",
        n_cases=len(outcomes),
        n_correct=n_correct,
        metric_name="accuracy",
        outcomes=outcomes,
        notes="gold-chunk containment in citations; proxy for human answer judgment",
        latencies_ms=latencies,
    )


def run_ann_recall_eval(
    n_vectors: int = 10000,
    dims: int = 256,
    k: int = 10,
    params: HnswParams | None = None,
    seed: int = 7,
    n_queries: int = 100,
) -> EvalReport:
    """Recall@k of the HNSW index against an exhaustive flat oracle on random
    unit vectors. Each (query, true neighbor) pair is one case."""
    if n_vectors < 1000:
        raise ValueError("need n >= 1000 vectors for a meaningful recall estimate")
    params = params or HnswParams(level_seed=seed)
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((n_vectors, dims)).astype(np.float32)
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    queries = rng.standard_normal((n_queries, dims)).astype(np.float32)
    queries /= np.linalg.norm(queries, axis=1, keepdims=True)

    index = HnswIndex(dims, params)
    t0 = time.perf_counter()
    for v in vecs:
        index.add(v)
    build_s = time.perf_counter() - t0

    v64 = vecs.astype(np.float64)
    outcomes = []
    latencies = []
    hits_total = 0
    for qi, q in enumerate(queries):
        q64 = q.astype(np.float64)
        truth = set(np.argsort(-(v64 @ q64))[:k].tolist())  # flat-scan oracle
        t1 = time.perf_counter()
        ids, _ = index.search(q64, k)
        latencies.append((time.perf_counter() - t1) * 1000.0)
        hits = len(truth & set(ids.tolist()))
        hits_total += hits
        outcomes.append(
            CaseOutcome(f"q{qi:03d}", hits == k, {"hits": hits, "k": k}, latencies[-1])
        )
    return EvalReport(
        suite="ann_recall",
        n_cases=k * n_queries,
        n_correct=hits_total,
        metric_name=f"recall@{k}",
        outcomes=outcomes,
        notes=f"n={n_vectors} d={dims} build_s={build_s:.1f} M={params.M} "
        f"efc={params.ef_construction} ef={params.ef_search}",
        latencies_ms=latencies,
    )


def run_latency_eval(cases: list[EvalCase], pipeline: RagPipeline, repeats: int = 3) -> EvalReport:
    """End-to-end answer latency over the instructional queries; a case is
    correct when it lands under the near-real-time bound (10 s)."""
    outcomes = []
    latencies = []
    n_correct = 0
    for r in range(repeats):
        for case in cases:
            answer = pipeline.answer_query(QueryRequest(text=case.query))
            ok = answer.latency_ms < 10_000.0
            n_correct += ok
            latencies.append(answer.latency_ms)
            outcomes.append(
                CaseOutcome(f"{case.case_id}#r{r}", ok, {"grounded": answer.grounded},
                            answer.latency_ms)
            )
    return EvalReport(
        suite="latency",
        n_cases=len(outcomes),
        n_correct=n_correct,
        metric_name="under_10s",
        outcomes=outcomes,
        latencies_ms=latencies,
    )
