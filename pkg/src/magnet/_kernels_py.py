"""Pure numpy implementations of the hot kernels.

Drop-in fallback for the compiled extension (magnet._speedups): same
signatures, and — because every uniform is a pure function of
(seed, stream, position) — bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

from . import rng

BACKEND = "python"

# route a bucket pair to the chunked sampler when it expects this many edges
_DENSE_EDGES = 2048


def naive_edges_table(packed, l, p_table, seed, self_edges):
    """Pairwise Bernoulli sampling for one shared binary affinity table.

    packed: (n, W) uint64 bit rows; p_table: flat (l+1)*(l+1) probabilities
    indexed by [both_zero * (l+1) + both_one].
    """
    n, words = packed.shape
    mask = np.full(words, ~np.uint64(0))
    tail = l - 64 * (words - 1)
    if tail < 64:
        mask[-1] = (np.uint64(1) << np.uint64(tail)) - np.uint64(1)
    step = l + 1
    out_u, out_v = [], []
    for u in range(n):
        v0 = u if self_edges else u + 1
        if v0 >= n:
            break
        pu = packed[u]
        rows = packed[v0:]
        n0 = np.zeros(n - v0, dtype=np.int64)
        n1 = np.zeros(n - v0, dtype=np.int64)
        for w in range(words):
            n0 += np.bitwise_count((~pu[w]) & (~rows[:, w]) & mask[w])
            n1 += np.bitwise_count(pu[w] & rows[:, w])
        p = p_table[n0 * step + n1]
        key = rng.stream_key(seed, rng.TAG_NAIVE, u)
        hits = np.flatnonzero(rng.uniforms(key, 0, n - v0) < p)
        if hits.size:
            out_u.append(np.full(hits.size, u, dtype=np.int64))
            out_v.append(hits + v0)
    return _concat(out_u), _concat(out_v)


def naive_edges_general(codes, dims, tables, toffs, use_log, seed, self_edges):
    """Pairwise sampling with per-attribute affinity tables.

    codes: (n, l) uint8; tables: concatenated row-major d_i x d_i blocks
    (log entries when use_log); toffs: block offsets.
    """
    n, l = codes.shape
    out_u, out_v = [], []
    for u in range(n):
        v0 = u if self_edges else u + 1
        if v0 >= n:
            break
        cu = codes[u]
        acc = np.zeros(n - v0) if use_log else np.ones(n - v0)
        for i in range(l):
            t = tables[toffs[i] + cu[i] * dims[i] + codes[v0:, i]]
            if use_log:
                acc += t
            else:
                acc *= t
        p = np.exp(acc) if use_log else acc
        key = rng.stream_key(seed, rng.TAG_NAIVE, u)
        hits = np.flatnonzero(rng.uniforms(key, 0, n - v0) < p)
        if hits.size:
            out_u.append(np.full(hits.size, u, dtype=np.int64))
            out_v.append(hits + v0)
    return _concat(out_u), _concat(out_v)


def bucketed_emit(reps, dims, tables, toffs, use_log, counts, seed, self_edges):
    """Geometric-skip sampling over every bucket pair.

    reps: (K, l) uint8 representative vectors; counts: (K,) node counts.
    Returns (pair_index, position) of every sampled pair slot; pair_index
    is the canonical upper-triangle index including the diagonal.
    """
    K, l = reps.shape
    counts = counts.astype(np.int64)
    emit_idx, emit_pos = [], []
    alive = {"idx": [], "key": [], "log1mp": [], "m": [], "pos": []}

    for bi in range(K):
        js = np.arange(bi, K)
        acc = np.zeros(K - bi) if use_log else np.ones(K - bi)
        ri = reps[bi]
        for i in range(l):
            t = tables[toffs[i] + ri[i] * dims[i] + reps[bi:, i]]
            if use_log:
                acc += t
            else:
                acc *= t
        p = np.exp(acc) if use_log else acc

        m = counts[bi] * counts[js]
        m[0] = counts[bi] * (counts[bi] - 1) // 2
        if self_edges:
            m[0] += counts[bi]
        pair_idx = bi * (2 * K - bi + 1) // 2 + (js - bi)
        keys = rng.stream_keys(seed, rng.TAG_BUCKET, pair_idx)

        with np.errstate(divide="ignore", invalid="ignore"):
            log1mp = np.log1p(-p)
            u = rng.uniforms_at(keys, 0)
            posf = np.floor(np.log1p(-u) / log1mp)
        live = posf < m  # nan/inf drop out here
        if not live.any():
            continue
        for v in np.flatnonzero(live):
            if (m[v] - posf[v]) * p[v] > _DENSE_EDGES:
                pp = _emit_dense(int(keys[v]), float(p[v]), int(m[v]),
                                 int(posf[v]), 1)
                emit_idx.append(np.full(pp.size, pair_idx[v], dtype=np.int64))
                emit_pos.append(pp)
            else:
                emit_idx.append(pair_idx[v:v + 1].astype(np.int64))
                emit_pos.append(np.array([int(posf[v])], dtype=np.int64))
                alive["idx"].append(pair_idx[v])
                alive["key"].append(keys[v])
                alive["log1mp"].append(log1mp[v])
                alive["m"].append(m[v])
                alive["pos"].append(posf[v])

    idx = np.array(alive["idx"], dtype=np.int64)
    key = np.array(alive["key"], dtype=np.uint64)
    log1mp = np.array(alive["log1mp"])
    m = np.array(alive["m"], dtype=np.float64)
    pos = np.array(alive["pos"], dtype=np.float64)
    r = 1
    while idx.size:
        with np.errstate(divide="ignore", invalid="ignore"):
            u = rng.uniforms_at(key, r)
            pos = pos + 1.0 + np.floor(np.log1p(-u) / log1mp)
        live = pos < m
        idx, key, log1mp, m, pos = (a[live] for a in (idx, key, log1mp, m, pos))
        if idx.size:
            emit_idx.append(idx.copy())
            emit_pos.append(pos.astype(np.int64))
        r += 1
    return _concat(emit_idx), _concat(emit_pos)


def _emit_dense(key, p, m, first_pos, start_j):
    """Chunked skip sampling of one dense bucket pair; returns every
    emitted position including first_pos (whose uniform was already
    consumed by the caller's first round)."""
    out = [np.array([first_pos], dtype=np.int64)]
    pos = float(first_pos)
    j = start_j
    log1mp = np.log1p(-p)
    while True:
        chunk = max(256, int((m - pos) * p * 1.2) + 16)
        u = rng.uniforms(key, j, chunk)
        j += chunk
        steps = np.floor(np.log1p(-u) / log1mp) + 1.0
        cum = pos + np.cumsum(steps)
        over = cum >= m
        if over.any():
            stop = int(np.argmax(over))
            out.append(cum[:stop].astype(np.int64))
            return np.concatenate(out)
        out.append(cum.astype(np.int64))
        pos = cum[-1]


def union_find_labels(n, us, vs):
    """Component labels by iterated min-label propagation with pointer
    jumping; nodes in the same component share a label."""
    labels = np.arange(n, dtype=np.int64)
    if len(us) == 0:
        return labels
    while True:
        mn = np.minimum(labels[us], labels[vs])
        before = labels.copy()
        np.minimum.at(labels, us, mn)
        np.minimum.at(labels, vs, mn)
        while True:
            nxt = labels[labels]
            if np.array_equal(nxt, labels):
                break
            labels = nxt
        if np.array_equal(labels, before):
            return labels


def bfs_distance_histogram(indptr, indices, sources, n):
    """Aggregate histogram of BFS distances: hist[d] = number of ordered
    (source, v) pairs with v != source and dist(source, v) = d."""
    hist = np.zeros(1, dtype=np.int64)
    for s in sources:
        visited = np.zeros(n, dtype=bool)
        visited[s] = True
        frontier = np.array([s], dtype=np.int64)
        d = 0
        while frontier.size:
            starts = indptr[frontier]
            counts = indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            shift = np.repeat(np.cumsum(counts) - counts, counts)
            gather = np.repeat(starts, counts) + (np.arange(total) - shift)
            neigh = indices[gather]
            cand = neigh[~visited[neigh]]
            newly = np.zeros(n, dtype=bool)
            newly[cand] = True
            visited |= newly
            frontier = np.flatnonzero(newly)
            d += 1
            if frontier.size:
                if d >= hist.size:
                    hist = np.concatenate([hist, np.zeros(d + 16 - hist.size,
                                                          dtype=np.int64)])
                hist[d] += frontier.size
    return hist


def _concat(parts):
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)
