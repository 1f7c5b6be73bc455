"""Operator command line: ingest / serve / eval."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .evalharness import (
    load_instructional_cases,
    run_ann_recall_eval,
    run_error_code_eval,
    run_instructional_eval,
    run_latency_eval,
)
from .rag.pipeline import RagPipeline
from .server.config import ServerConfig
from .server.ingest import ingest, load_deployment
from .vecstore import HnswParams


def _load_config(path: str | None) -> ServerConfig:
    if path:
        return ServerConfig.from_file(path)
    return ServerConfig()


def cmd_ingest(args) -> int:
    config = _load_config(args.config)
    manifest = args.manifest or config.manifest
    if not manifest:
        print("error: no manifest given (use --manifest or set it in the config)", file=sys.stderr)
        return 2
    _, report = ingest(manifest, config)
    print(f"documents ingested : {report.documents}")
    print(f"chunks embedded    : {report.chunks}")
    for name, count in report.segment_counts.items():
        print(f"segment {name:<14}: {count}")
    print(f"catalog entries    : {report.catalog_entries}")
    if report.malformed_rows:
        print(f"malformed rows     : {len(report.malformed_rows)}")
    for err in report.errors:
        print(f"skipped {err['path']}: {err['error']}", file=sys.stderr)
    print(f"data directory     : {config.data_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server.app import create_app

    config = _load_config(args.config)
    if args.host:
        config.listen_host = args.host
    if args.port:
        config.listen_port = args.port
    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
    return 0


def cmd_eval(args) -> int:
    config = _load_config(args.config)
    if args.suite == "ann_recall":
        report = run_ann_recall_eval(
            n_vectors=args.n_vectors,
            dims=config.embedder_dimension,
            k=args.k,
            params=HnswParams(
                M=config.hnsw_m,
                ef_construction=config.hnsw_ef_construction,
                ef_search=config.hnsw_ef_search,
                level_seed=args.seed,
            ),
            seed=args.seed,
        )
    else:
        deployment = load_deployment(config)
        pipeline = RagPipeline(
            deployment, tau_ground=config.tau_ground, default_k=config.default_k
        )
        if args.suite == "error_code":
            report = run_error_code_eval(deployment, pipeline)
        else:
            if not config.eval_cases_path:
                print("error: config needs eval_cases_path for this suite", file=sys.stderr)
                return 2
            cases = load_instructional_cases(config.eval_cases_path, deployment.chunks)
            if args.suite == "instructional":
                report = run_instructional_eval(cases, pipeline)
            else:
                report = run_latency_eval(cases, pipeline)

    print(report.summary_table())
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.to_jsonl(include_volatile=True), encoding="utf-8")
        print(f"report written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="devicedesk",
        description="Offline diagnostic assistant for biomedical equipment technicians.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build vector stores from a corpus manifest")
    p_ingest.add_argument("--manifest", help="corpus manifest path")
    p_ingest.add_argument("--config", help="server config file")
    p_ingest.set_defaults(fn=cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="server config file")
    p_serve.add_argument("--host", help="bind address override")
    p_serve.add_argument("--port", type=int, help="port override")
    p_serve.set_defaults(fn=cmd_serve)

    p_eval = sub.add_parser("eval", help="run a benchmark suite")
    p_eval.add_argument(
        "--suite",
        required=True,
        choices=["error_code", "instructional", "ann_recall", "latency"],
    )
    p_eval.add_argument("--config", help="server config file")
    p_eval.add_argument("--seed", type=int, default=7)
    p_eval.add_argument("--out", help="write the line-delimited report here")
    p_eval.add_argument("--n-vectors", type=int, default=10000, help="ann_recall corpus size")
    p_eval.add_argument("--k", type=int, default=10, help="ann_recall neighbors")
    p_eval.set_defaults(fn=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
