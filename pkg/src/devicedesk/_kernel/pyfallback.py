"""Pure numpy implementation of the hot kernels.

Selected at import time when the compiled extension is unavailable (see
``devicedesk._kernel``). Both backends implement the same four functions with
identical integer semantics; float results may differ from the compiled
kernel in the last ulp (BLAS pairwise summation vs sequential C loops), which
is why cross-backend tests compare rankings, not bytes.
"""

import heapq

import numpy as np

BACKEND = "python"

_FNV_OFFSET = np.uint64(14695981039346656037)
_FNV_PRIME = np.uint64(1099511628211)


def ngram_hashes(data: bytes, nmin: int, nmax: int, seed: int) -> np.ndarray:
    """FNV-1a 64-bit hash of every n-gram window, seed bytes mixed in first.

    Order of the output is fixed: all windows of length nmin left to right,
    then nmin+1, ... up to nmax. uint64 arithmetic wraps, matching the C loop.
    """
    buf = np.frombuffer(data, dtype=np.uint8)
    # fold the 8 little-endian seed bytes into the offset basis (wrapping u64)
    mask = (1 << 64) - 1
    h0 = int(_FNV_OFFSET)
    for b in (int(seed) & mask).to_bytes(8, "little"):
        h0 = ((h0 ^ b) * int(_FNV_PRIME)) & mask
    h0 = np.uint64(h0)
    out = []
    with np.errstate(over="ignore"):
        for n in range(nmin, nmax + 1):
            count = len(buf) - n + 1
            if count <= 0:
                continue
            h = np.full(count, h0, dtype=np.uint64)
            for j in range(n):
                h = (h ^ buf[j : j + count].astype(np.uint64)) * _FNV_PRIME
            out.append(h)
    if not out:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(out)


def score_rows(matrix: np.ndarray, row_ids, query: np.ndarray) -> np.ndarray:
    """Dot products of selected float32 rows against a float64 query."""
    rows = matrix if row_ids is None else matrix[row_ids]
    return rows.astype(np.float64) @ query


def search_layer(matrix, adj, cnt, entry_ids, query, ef, visited, stamp):
    """Greedy beam search over one graph layer.

    ``visited`` is a reusable int32 stamp array (visited[i] == stamp means
    seen this call). Returns (ids, dists) of up to ``ef`` nodes sorted
    ascending by (distance, id); distance = 1 - dot, computed in float32
    (ordering only — callers recompute exact scores for returned ids).
    """
    cand = []  # min-heap of (dist, id): explore closest first
    top = []  # min-heap of (-dist, -id): root is the worst kept result

    def offer(d, nid):
        if len(top) < ef:
            heapq.heappush(cand, (d, nid))
            heapq.heappush(top, (-d, -nid))
        elif (d, nid) < (-top[0][0], -top[0][1]):
            heapq.heappush(cand, (d, nid))
            heapq.heapreplace(top, (-d, -nid))

    for eid in entry_ids:
        eid = int(eid)
        if visited[eid] == stamp:
            continue
        visited[eid] = stamp
        d = 1.0 - float(matrix[eid] @ query)
        offer(d, eid)

    while cand:
        d, cid = heapq.heappop(cand)
        if len(top) >= ef and d > -top[0][0]:
            break
        neigh = adj[cid, : cnt[cid]]
        fresh = [int(v) for v in neigh if visited[v] != stamp]
        if not fresh:
            continue
        for v in fresh:
            visited[v] = stamp
        dists = matrix[fresh] @ query
        for v, dv in zip(fresh, dists):
            offer(1.0 - float(dv), v)

    pairs = sorted((-nd, -nid) for nd, nid in top)
    ids = np.fromiter((p[1] for p in pairs), dtype=np.int32, count=len(pairs))
    dists = np.fromiter((p[0] for p in pairs), dtype=np.float64, count=len(pairs))
    return ids, dists


def link_backlinks(matrix, adj, cnt, node, neighbors, cap):
    """Add ``node`` as a backlink of each neighbor, re-selecting a diverse
    neighborhood (same rule as select_heuristic) when a neighbor overflows."""
    for nb in neighbors:
        nb = int(nb)
        c = int(cnt[nb])
        if c < cap:
            adj[nb, c] = node
            cnt[nb] = c + 1
            continue
        ids = np.empty(c + 1, dtype=np.int32)
        ids[:c] = adj[nb, :c]
        ids[c] = node
        dists = (1.0 - (matrix[ids] @ matrix[nb]).astype(np.float64))
        order = np.lexsort((ids, dists))
        kept = select_heuristic(matrix, ids[order], dists[order], cap)
        adj[nb, : len(kept)] = kept
        adj[nb, len(kept) :] = -1
        cnt[nb] = len(kept)


def select_heuristic(matrix, cand_ids, cand_dists, m):
    """Diversity-aware neighbor selection: keep a candidate only when it is
    closer to the query than to every already-selected neighbor.

    ``cand_ids`` must already be sorted ascending by (distance, id).
    """
    if len(cand_ids) <= m:
        return np.asarray(cand_ids, dtype=np.int32).copy()
    selected: list[int] = []
    for d, e in zip(cand_dists, cand_ids):
        if len(selected) >= m:
            break
        e = int(e)
        if not selected:
            selected.append(e)
            continue
        dmin = float(np.min(1.0 - (matrix[selected] @ matrix[e]).astype(np.float64)))
        if float(d) < dmin:
            selected.append(e)
    return np.asarray(selected, dtype=np.int32)
