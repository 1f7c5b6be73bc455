# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: n-gram hashing, dot scans, HNSW layer search and
neighbor selection. Mirrors devicedesk._kernel.pyfallback exactly for integer
results; float results agree to last-ulp rounding.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdint cimport uint8_t, uint64_t, int32_t

cnp.import_array()

BACKEND = "cython"

cdef uint64_t FNV_OFFSET = <uint64_t>14695981039346656037u
cdef uint64_t FNV_PRIME = <uint64_t>1099511628211u


def ngram_hashes(bytes data, int nmin, int nmax, object seed):
    """FNV-1a 64-bit hashes of all n-gram windows; see pyfallback docstring."""
    cdef const uint8_t[::1] buf = data
    cdef Py_ssize_t length = buf.shape[0]
    cdef uint64_t h0 = FNV_OFFSET
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int b
    for b in range(8):
        h0 = (h0 ^ ((s >> (8 * b)) & 0xFF)) * FNV_PRIME

    cdef Py_ssize_t total = 0
    cdef int n
    for n in range(nmin, nmax + 1):
        if length - n + 1 > 0:
            total += length - n + 1
    out_arr = np.empty(total, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef Py_ssize_t pos = 0, i
    cdef int j
    cdef uint64_t h
    for n in range(nmin, nmax + 1):
        for i in range(length - n + 1):
            h = h0
            for j in range(n):
                h = (h ^ <uint64_t>buf[i + j]) * FNV_PRIME
            out[pos] = h
            pos += 1
    return out_arr


cdef inline double _dot(const float[:, ::1] mat, Py_ssize_t row, const double[::1] q) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t j
    for j in range(q.shape[0]):
        s += (<double>mat[row, j]) * q[j]
    return s


cdef inline float _dotf(const float[:, ::1] mat, Py_ssize_t row, const float[::1] q) nogil:
    cdef float s = 0.0
    cdef Py_ssize_t j
    for j in range(q.shape[0]):
        s += mat[row, j] * q[j]
    return s


cdef inline float _dotf_rows(const float[:, ::1] mat, Py_ssize_t a, Py_ssize_t b,
                             Py_ssize_t dim) nogil:
    cdef float s = 0.0
    cdef Py_ssize_t j
    for j in range(dim):
        s += mat[a, j] * mat[b, j]
    return s


def score_rows(cnp.ndarray matrix, row_ids, cnp.ndarray query):
    """Dot products of selected float32 rows against a float64 query."""
    cdef const float[:, ::1] mat = matrix
    cdef const double[::1] q = query
    cdef const int32_t[::1] ids
    cdef double[::1] scores
    cdef Py_ssize_t i, n
    if row_ids is None:
        n = mat.shape[0]
        out_arr = np.empty(n, dtype=np.float64)
        scores = out_arr
        for i in range(n):
            scores[i] = _dot(mat, i, q)
        return out_arr
    ids_arr = np.ascontiguousarray(row_ids, dtype=np.int32)
    ids = ids_arr
    n = ids.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    scores = out_arr
    for i in range(n):
        scores[i] = _dot(mat, ids[i], q)
    return out_arr


# ---------------------------------------------------------------------------
# binary heaps over parallel (dist, id) arrays, ordered lexicographically
# ---------------------------------------------------------------------------

cdef inline bint _less(double d1, int32_t i1, double d2, int32_t i2) nogil:
    return d1 < d2 or (d1 == d2 and i1 < i2)

cdef inline void _min_push(double[::1] hd, int32_t[::1] hi, Py_ssize_t* size,
                           double d, int32_t nid) nogil:
    cdef Py_ssize_t k = size[0], parent
    hd[k] = d
    hi[k] = nid
    size[0] += 1
    while k > 0:
        parent = (k - 1) >> 1
        if _less(hd[k], hi[k], hd[parent], hi[parent]):
            hd[k], hd[parent] = hd[parent], hd[k]
            hi[k], hi[parent] = hi[parent], hi[k]
            k = parent
        else:
            break

cdef inline void _min_siftdown(double[::1] hd, int32_t[::1] hi, Py_ssize_t size) nogil:
    cdef Py_ssize_t k = 0, child
    while True:
        child = 2 * k + 1
        if child >= size:
            break
        if child + 1 < size and _less(hd[child + 1], hi[child + 1], hd[child], hi[child]):
            child += 1
        if _less(hd[child], hi[child], hd[k], hi[k]):
            hd[k], hd[child] = hd[child], hd[k]
            hi[k], hi[child] = hi[child], hi[k]
            k = child
        else:
            break

cdef inline void _min_pop(double[::1] hd, int32_t[::1] hi, Py_ssize_t* size) nogil:
    size[0] -= 1
    hd[0] = hd[size[0]]
    hi[0] = hi[size[0]]
    _min_siftdown(hd, hi, size[0])

cdef inline void _max_push(double[::1] hd, int32_t[::1] hi, Py_ssize_t* size,
                           double d, int32_t nid) nogil:
    cdef Py_ssize_t k = size[0], parent
    hd[k] = d
    hi[k] = nid
    size[0] += 1
    while k > 0:
        parent = (k - 1) >> 1
        if _less(hd[parent], hi[parent], hd[k], hi[k]):
            hd[k], hd[parent] = hd[parent], hd[k]
            hi[k], hi[parent] = hi[parent], hi[k]
            k = parent
        else:
            break

cdef inline void _max_siftdown(double[::1] hd, int32_t[::1] hi, Py_ssize_t size) nogil:
    cdef Py_ssize_t k = 0, child
    while True:
        child = 2 * k + 1
        if child >= size:
            break
        if child + 1 < size and _less(hd[child], hi[child], hd[child + 1], hi[child + 1]):
            child += 1
        if _less(hd[k], hi[k], hd[child], hi[child]):
            hd[k], hd[child] = hd[child], hd[k]
            hi[k], hi[child] = hi[child], hi[k]
            k = child
        else:
            break

cdef inline void _max_replace(double[::1] hd, int32_t[::1] hi, Py_ssize_t size,
                              double d, int32_t nid) nogil:
    hd[0] = d
    hi[0] = nid
    _max_siftdown(hd, hi, size)


def search_layer(cnp.ndarray matrix, cnp.ndarray adj, cnp.ndarray cnt,
                 entry_ids, cnp.ndarray query, int ef,
                 cnp.ndarray visited_arr, int stamp):
    """Greedy beam search over one graph layer; identical contract to the
    pyfallback version: returns (ids, dists) sorted ascending by (dist, id).
    Distances are computed in float32 (ordering only); callers wanting exact
    scores recompute them for the returned ids."""
    cdef const float[:, ::1] mat = matrix
    cdef const int32_t[:, ::1] adjacency = adj
    cdef const int32_t[::1] counts = cnt
    cdef const float[::1] q = query
    cdef int32_t[::1] visited = visited_arr
    cdef Py_ssize_t n_nodes = mat.shape[0]

    entries_arr = np.ascontiguousarray(entry_ids, dtype=np.int32)
    cdef const int32_t[::1] entries = entries_arr

    # candidate min-heap (capacity: every node visited at most once)
    cand_d_arr = np.empty(n_nodes + 1, dtype=np.float64)
    cand_i_arr = np.empty(n_nodes + 1, dtype=np.int32)
    top_d_arr = np.empty(ef + 1, dtype=np.float64)
    top_i_arr = np.empty(ef + 1, dtype=np.int32)
    cdef double[::1] cand_d = cand_d_arr
    cdef int32_t[::1] cand_i = cand_i_arr
    cdef double[::1] top_d = top_d_arr
    cdef int32_t[::1] top_i = top_i_arr
    cdef Py_ssize_t n_cand = 0, n_top = 0

    cdef Py_ssize_t ei, k
    cdef int32_t eid, v, cid
    cdef double d, dv
    cdef int32_t deg

    for ei in range(entries.shape[0]):
        eid = entries[ei]
        if visited[eid] == stamp:
            continue
        visited[eid] = stamp
        d = 1.0 - <double>_dotf(mat, eid, q)
        if n_top < ef:
            _min_push(cand_d, cand_i, &n_cand, d, eid)
            _max_push(top_d, top_i, &n_top, d, eid)
        elif _less(d, eid, top_d[0], top_i[0]):
            _min_push(cand_d, cand_i, &n_cand, d, eid)
            _max_replace(top_d, top_i, n_top, d, eid)

    while n_cand > 0:
        d = cand_d[0]
        cid = cand_i[0]
        _min_pop(cand_d, cand_i, &n_cand)
        if n_top >= ef and d > top_d[0]:
            break
        deg = counts[cid]
        for k in range(deg):
            v = adjacency[cid, k]
            if visited[v] == stamp:
                continue
            visited[v] = stamp
            dv = 1.0 - <double>_dotf(mat, v, q)
            if n_top < ef:
                _min_push(cand_d, cand_i, &n_cand, dv, v)
                _max_push(top_d, top_i, &n_top, dv, v)
            elif _less(dv, v, top_d[0], top_i[0]):
                _min_push(cand_d, cand_i, &n_cand, dv, v)
                _max_replace(top_d, top_i, n_top, dv, v)

    # heapsort the max-heap into ascending (dist, id) order
    out_ids = np.empty(n_top, dtype=np.int32)
    out_dists = np.empty(n_top, dtype=np.float64)
    cdef int32_t[::1] oi = out_ids
    cdef double[::1] od = out_dists
    cdef Py_ssize_t size = n_top
    while size > 0:
        oi[size - 1] = top_i[0]
        od[size - 1] = top_d[0]
        size -= 1
        top_d[0] = top_d[size]
        top_i[0] = top_i[size]
        _max_siftdown(top_d, top_i, size)
    return out_ids, out_dists


def link_backlinks(cnp.ndarray matrix, cnp.ndarray adj, cnp.ndarray cnt,
                   int node, neighbors, int cap):
    """Add ``node`` as a backlink of each neighbor, re-selecting a diverse
    neighborhood (same rule as select_heuristic) when a neighbor overflows."""
    cdef const float[:, ::1] mat = matrix
    cdef int32_t[:, ::1] adjacency = adj
    cdef int32_t[::1] counts = cnt
    cdef Py_ssize_t dim = mat.shape[1]
    nb_arr = np.ascontiguousarray(neighbors, dtype=np.int32)
    cdef const int32_t[::1] nbs = nb_arr

    # prune buffers: degree cap is small (<= 2*M), stack-ish scratch arrays
    cdef Py_ssize_t max_c = cap + 1
    ids_arr = np.empty(max_c, dtype=np.int32)
    d_arr = np.empty(max_c, dtype=np.float64)
    sel_arr = np.empty(max_c, dtype=np.int32)
    cdef int32_t[::1] ids = ids_arr
    cdef double[::1] dists = d_arr
    cdef int32_t[::1] sel = sel_arr

    cdef Py_ssize_t i, j, k, c, n_sel
    cdef int32_t nb, e, tmp_i
    cdef double d, dmin, dist_es, tmp_d

    for i in range(nbs.shape[0]):
        nb = nbs[i]
        c = counts[nb]
        if c < cap:
            adjacency[nb, c] = node
            counts[nb] = c + 1
            continue
        for j in range(c):
            ids[j] = adjacency[nb, j]
        ids[c] = node
        c += 1
        for j in range(c):
            dists[j] = 1.0 - <double>_dotf_rows(mat, nb, ids[j], dim)
        # insertion sort by (dist, id); c <= 2*M + 1 keeps this cheap
        for j in range(1, c):
            tmp_d = dists[j]
            tmp_i = ids[j]
            k = j
            while k > 0 and _less(tmp_d, tmp_i, dists[k - 1], ids[k - 1]):
                dists[k] = dists[k - 1]
                ids[k] = ids[k - 1]
                k -= 1
            dists[k] = tmp_d
            ids[k] = tmp_i
        # diversity-aware re-selection (same rule as select_heuristic)
        n_sel = 0
        for j in range(c):
            if n_sel >= cap:
                break
            e = ids[j]
            d = dists[j]
            if n_sel == 0:
                sel[0] = e
                n_sel = 1
                continue
            dmin = INFINITY
            for k in range(n_sel):
                dist_es = 1.0 - <double>_dotf_rows(mat, e, sel[k], dim)
                if dist_es < dmin:
                    dmin = dist_es
            if d < dmin:
                sel[n_sel] = e
                n_sel += 1
        for j in range(n_sel):
            adjacency[nb, j] = sel[j]
        for j in range(n_sel, cap):
            adjacency[nb, j] = -1
        counts[nb] = n_sel


def select_heuristic(cnp.ndarray matrix, cand_ids, cand_dists, int m):
    """Diversity-aware neighbor selection; see pyfallback docstring."""
    ids_arr = np.ascontiguousarray(cand_ids, dtype=np.int32)
    dists_arr = np.ascontiguousarray(cand_dists, dtype=np.float64)
    cdef const int32_t[::1] ids = ids_arr
    cdef const double[::1] dists = dists_arr
    cdef Py_ssize_t n = ids.shape[0]
    if n <= m:
        return ids_arr.copy()

    cdef const float[:, ::1] mat = matrix
    cdef Py_ssize_t dim = mat.shape[1]
    selected_arr = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] selected = selected_arr
    cdef Py_ssize_t n_sel = 0
    cdef Py_ssize_t i, s
    cdef int32_t e
    cdef double d, dmin, dist_es

    for i in range(n):
        if n_sel >= m:
            break
        e = ids[i]
        d = dists[i]
        if n_sel == 0:
            selected[0] = e
            n_sel = 1
            continue
        dmin = INFINITY
        for s in range(n_sel):
            dist_es = 1.0 - <double>_dotf_rows(mat, e, selected[s], dim)
            if dist_es < dmin:
                dmin = dist_es
        if d < dmin:
            selected[n_sel] = e
            n_sel += 1
    return selected_arr[:n_sel].copy()


cdef inline double _dot_rows(const float[:, ::1] mat, Py_ssize_t a, Py_ssize_t b,
                             Py_ssize_t dim) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t j
    for j in range(dim):
        s += (<double>mat[a, j]) * (<double>mat[b, j])
    return s
