#!/usr/bin/env python3
"""Compare the compiled kernel against the pure-numpy fallback.

Covers the three hot paths: character n-gram hashing (ingest), HNSW graph
construction (ingest), and HNSW search (query), plus the numpy flat scan as
the exact-search reference point.

    python benchmarks/bench_kernels.py [--n 5000] [--dim 256] [--queries 50]
"""

import argparse
import time

import numpy as np

import devicedesk._kernel as kernel
from devicedesk._kernel import load_backend, pyfallback
from devicedesk.vecstore import HnswIndex, HnswParams

KERNEL_FNS = ("ngram_hashes", "score_rows", "search_layer", "select_heuristic", "link_backlinks")


def swap_backend(impl):
    for fn in KERNEL_FNS:
        setattr(kernel, fn, getattr(impl, fn))


def bench_hashing(impl, text: bytes, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        impl.ngram_hashes(text, 3, 5, 1234)
    return (time.perf_counter() - t0) / repeats


def bench_hnsw(impl, vecs, queries, k=10):
    swap_backend(impl)
    idx = HnswIndex(vecs.shape[1], HnswParams(level_seed=7))
    t0 = time.perf_counter()
    for v in vecs:
        idx.add(v)
    build_s = time.perf_counter() - t0
    t1 = time.perf_counter()
    for q in queries:
        idx.search(q.astype(np.float64), k)
    search_ms = (time.perf_counter() - t1) * 1000.0 / len(queries)
    return build_s, search_ms


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=5000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--queries", type=int, default=50)
    parser.add_argument("--hash-repeats", type=int, default=20)
    args = parser.parse_args()

    backends = [("python", pyfallback)]
    try:
        backends.insert(0, ("cython", load_backend("cython")))
    except ImportError:
        print("compiled kernel not built; benchmarking fallback only")

    rng = np.random.default_rng(7)
    vecs = rng.standard_normal((args.n, args.dim)).astype(np.float32)
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    queries = rng.standard_normal((args.queries, args.dim)).astype(np.float32)
    queries /= np.linalg.norm(queries, axis=1, keepdims=True)
    sample_text = (b"probe connector fault level calibration phantom gain " * 40)[:2000]

    print(f"corpus n={args.n} dim={args.dim} queries={args.queries}")
    print(f"{'backend':<8} {'hash 2kB (ms)':>14} {'hnsw build (s)':>15} {'hnsw search (ms/q)':>19}")
    results = {}
    for name, impl in backends:
        hash_ms = bench_hashing(impl, sample_text, args.hash_repeats) * 1000.0
        build_s, search_ms = bench_hnsw(impl, vecs, queries)
        results[name] = (hash_ms, build_s, search_ms)
        print(f"{name:<8} {hash_ms:>14.3f} {build_s:>15.2f} {search_ms:>19.3f}")

    # exact flat scan reference (numpy BLAS, used by the flat index kind)
    v64 = vecs.astype(np.float64)
    t0 = time.perf_counter()
    for q in queries:
        scores = v64 @ q.astype(np.float64)
        np.argpartition(-scores, 10)[:10]
    flat_ms = (time.perf_counter() - t0) * 1000.0 / len(queries)
    print(f"{'flat':<8} {'-':>14} {'-':>15} {flat_ms:>19.3f}   (numpy exact scan)")

    if "cython" in results and "python" in results:
        c, p = results["cython"], results["python"]
        print(
            f"\nspeedup cython vs python: hashing x{p[0] / c[0]:.1f}, "
            f"build x{p[1] / c[1]:.1f}, search x{p[2] / c[2]:.1f}"
        )
    swap_backend(kernel._impl)


if __name__ == "__main__":
    main()
