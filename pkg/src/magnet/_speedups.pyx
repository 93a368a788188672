# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: pairwise edge sampling, geometric-skip bucket
sampling, union-find, and BFS.  Mirrors magnet._kernels_py exactly; both
draw uniforms as pure functions of (seed, stream, position), so results
are interchangeable."""

import numpy as np

cimport cython
from libc.math cimport exp, floor, log1p
from libc.stdint cimport int64_t, uint8_t, uint64_t

BACKEND = "compiled"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int popcount64(unsigned long long x)
    { return __builtin_popcountll(x); }
    #else
    static inline int popcount64(unsigned long long x) {
        x = x - ((x >> 1) & 0x5555555555555555ULL);
        x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
        x = (x + (x >> 4)) & 0x0f0f0f0f0f0f0f0fULL;
        return (int)((x * 0x0101010101010101ULL) >> 56);
    }
    #endif
    """
    int popcount64(uint64_t x) nogil

cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t TAG_C = <uint64_t>0xD1B54A32D192ED03
cdef uint64_t IDX_C = <uint64_t>0x8CB92BA72F3D8DD7
cdef uint64_t TAG_NAIVE = 2
cdef uint64_t TAG_BUCKET = 3


cdef inline uint64_t mix64(uint64_t z) nogil:
    z ^= z >> 30
    z *= <uint64_t>0xBF58476D1CE4E5B9
    z ^= z >> 27
    z *= <uint64_t>0x94D049BB133111EB
    z ^= z >> 31
    return z


cdef inline uint64_t stream_key(uint64_t seed, uint64_t tag, uint64_t idx) nogil:
    cdef uint64_t h = mix64(seed + GOLDEN)
    h = mix64(h ^ (tag * TAG_C))
    return mix64(h ^ (idx * IDX_C))


cdef inline double unit(uint64_t key, uint64_t j) nogil:
    cdef uint64_t w = mix64(key ^ ((j + 1) * GOLDEN))
    return <double>(w >> 11) * (1.0 / 9007199254740992.0)


cdef class _EdgeBuf:
    cdef int64_t[::1] us
    cdef int64_t[::1] vs
    cdef object us_arr, vs_arr
    cdef Py_ssize_t size

    def __cinit__(self, Py_ssize_t cap=4096):
        self.us_arr = np.empty(cap, dtype=np.int64)
        self.vs_arr = np.empty(cap, dtype=np.int64)
        self.us = self.us_arr
        self.vs = self.vs_arr
        self.size = 0

    cdef inline void push(self, int64_t u, int64_t v):
        cdef Py_ssize_t cap = self.us.shape[0]
        if self.size == cap:
            self.us_arr = np.resize(self.us_arr, cap * 2)
            self.vs_arr = np.resize(self.vs_arr, cap * 2)
            self.us = self.us_arr
            self.vs = self.vs_arr
        self.us[self.size] = u
        self.vs[self.size] = v
        self.size += 1

    cdef tuple result(self):
        return (self.us_arr[: self.size].copy(), self.vs_arr[: self.size].copy())


def naive_edges_table(packed, int64_t l, p_table, seed, bint self_edges):
    cdef const uint64_t[:, ::1] pk = np.ascontiguousarray(packed, dtype=np.uint64)
    cdef const double[::1] table = np.ascontiguousarray(p_table, dtype=np.float64)
    cdef uint64_t sd = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = pk.shape[0], words = pk.shape[1]
    cdef Py_ssize_t u, v, w
    cdef int64_t n0, n1, step = l + 1, tail = l - 64 * (words - 1)
    cdef uint64_t key, mask_last = <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef double p
    if tail < 64:
        mask_last = (<uint64_t>1 << tail) - 1
    cdef _EdgeBuf buf = _EdgeBuf()
    for u in range(n):
        key = stream_key(sd, TAG_NAIVE, <uint64_t>u)
        for v in range(u if self_edges else u + 1, n):
            n0 = 0
            n1 = 0
            for w in range(words):
                if w == words - 1:
                    n0 += popcount64((~pk[u, w]) & (~pk[v, w]) & mask_last)
                else:
                    n0 += popcount64((~pk[u, w]) & (~pk[v, w]))
                n1 += popcount64(pk[u, w] & pk[v, w])
            p = table[n0 * step + n1]
            if unit(key, <uint64_t>(v - u if self_edges else v - u - 1)) < p:
                buf.push(u, v)
    return buf.result()


def naive_edges_general(codes, dims, tables, toffs, bint use_log, seed,
                        bint self_edges):
    cdef const uint8_t[:, ::1] cd = np.ascontiguousarray(codes, dtype=np.uint8)
    cdef const int64_t[::1] dm = np.ascontiguousarray(dims, dtype=np.int64)
    cdef const double[::1] tb = np.ascontiguousarray(tables, dtype=np.float64)
    cdef const int64_t[::1] to = np.ascontiguousarray(toffs, dtype=np.int64)
    cdef uint64_t sd = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = cd.shape[0], l = cd.shape[1]
    cdef Py_ssize_t u, v, i
    cdef uint64_t key
    cdef double acc, p
    cdef _EdgeBuf buf = _EdgeBuf()
    for u in range(n):
        key = stream_key(sd, TAG_NAIVE, <uint64_t>u)
        for v in range(u if self_edges else u + 1, n):
            if use_log:
                acc = 0.0
                for i in range(l):
                    acc += tb[to[i] + cd[u, i] * dm[i] + cd[v, i]]
                p = exp(acc)
            else:
                p = 1.0
                for i in range(l):
                    p *= tb[to[i] + cd[u, i] * dm[i] + cd[v, i]]
            if unit(key, <uint64_t>(v - u if self_edges else v - u - 1)) < p:
                buf.push(u, v)
    return buf.result()


def bucketed_emit(reps, dims, tables, toffs, bint use_log, counts, seed,
                  bint self_edges):
    cdef const uint8_t[:, ::1] rp = np.ascontiguousarray(reps, dtype=np.uint8)
    cdef const int64_t[::1] dm = np.ascontiguousarray(dims, dtype=np.int64)
    cdef const double[::1] tb = np.ascontiguousarray(tables, dtype=np.float64)
    cdef const int64_t[::1] to = np.ascontiguousarray(toffs, dtype=np.int64)
    cdef const int64_t[::1] ct = np.ascontiguousarray(counts, dtype=np.int64)
    cdef uint64_t sd = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t K = rp.shape[0], l = rp.shape[1]
    cdef Py_ssize_t bi, bj, i
    cdef int64_t m
    cdef uint64_t key, j, pair_idx
    cdef double acc, p, log1mp, posf, mf
    cdef _EdgeBuf buf = _EdgeBuf()  # (pair_idx, position) pairs
    for bi in range(K):
        for bj in range(bi, K):
            if use_log:
                acc = 0.0
                for i in range(l):
                    acc += tb[to[i] + rp[bi, i] * dm[i] + rp[bj, i]]
                p = exp(acc)
            else:
                p = 1.0
                for i in range(l):
                    p *= tb[to[i] + rp[bi, i] * dm[i] + rp[bj, i]]
            if bi == bj:
                m = ct[bi] * (ct[bi] - 1) // 2
                if self_edges:
                    m += ct[bi]
            else:
                m = ct[bi] * ct[bj]
            if m == 0 or p <= 0.0:
                continue
            pair_idx = <uint64_t>(bi * (2 * K - bi + 1) // 2 + (bj - bi))
            key = stream_key(sd, TAG_BUCKET, pair_idx)
            log1mp = log1p(-p)
            mf = <double>m
            posf = -1.0
            j = 0
            while True:
                posf = posf + 1.0 + floor(log1p(-unit(key, j)) / log1mp)
                j += 1
                if not (posf < mf):  # catches NaN as well
                    break
                buf.push(<int64_t>pair_idx, <int64_t>posf)
    return buf.result()


def union_find_labels(Py_ssize_t n, us, vs):
    """Disjoint-set labels; nodes in the same component share a label
    (the component's minimum node id, matching the fallback)."""
    cdef const int64_t[::1] eu = np.ascontiguousarray(us, dtype=np.int64)
    cdef const int64_t[::1] ev = np.ascontiguousarray(vs, dtype=np.int64)
    parent_arr = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef Py_ssize_t e, m = eu.shape[0]
    cdef int64_t a, b, r
    with nogil:
        for e in range(m):
            a = eu[e]
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = ev[e]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
        for e in range(n):
            a = e
            while parent[a] != a:
                a = parent[a]
            r = a
            a = e
            while parent[a] != a:
                b = parent[a]
                parent[a] = r
                a = b
    return parent_arr


def bfs_distance_histogram(indptr, indices, sources, Py_ssize_t n):
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    dist_arr = np.empty(n, dtype=np.int64)
    queue_arr = np.empty(n, dtype=np.int64)
    hist_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    cdef int64_t[::1] queue = queue_arr
    cdef int64_t[::1] hist = hist_arr
    cdef Py_ssize_t si, head, tail, v
    cdef int64_t s, u, w, d, maxd = 0
    with nogil:
        for si in range(src.shape[0]):
            s = src[si]
            for v in range(n):
                dist[v] = -1
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                d = dist[u] + 1
                for v in range(ip[u], ip[u + 1]):
                    w = ix[v]
                    if dist[w] < 0:
                        dist[w] = d
                        hist[d] += 1
                        if d > maxd:
                            maxd = d
                        queue[tail] = w
                        tail += 1
    return hist_arr[: maxd + 1].copy()
