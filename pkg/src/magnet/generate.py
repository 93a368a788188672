"""Graph sampling: the exact O(n^2) pairwise path and the bucketed path.

Both paths draw each unordered pair (u, v) independently with probability
edge_probability(u, v) and are deterministic given (config, attrs, seed).
They consume disjoint random substreams, so they agree in distribution but
not edge-for-edge.  The bucketed path groups nodes by attribute vector —
the probability is constant across a bucket pair — and samples hits by
geometric skipping, so its cost scales with edges drawn, not pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import AttributeAssignment, MagConfig, validate_assignment
from .errors import CapacityError, ValidationError

# Naive-path budget: refuse above this many attribute cells (n * l).
DEFAULT_NAIVE_CELL_BUDGET = 1 << 30


@dataclass(frozen=True)
class Graph:
    """Undirected graph as a sorted array of node pairs with u <= v.

    A self-edge contributes 2 to its endpoint's degree.
    """

    n: int
    edges: np.ndarray
    self_edges_allowed: bool = False
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        e = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise ValidationError("edge endpoint out of range")
            if np.any(e[:, 0] > e[:, 1]):
                raise ValidationError("edges must be normalized to u <= v")
            if not self.self_edges_allowed and np.any(e[:, 0] == e[:, 1]):
                raise ValidationError("self-edge present but not allowed")
            keys = e[:, 0] * self.n + e[:, 1]
            if np.any(np.diff(keys) <= 0):
                raise ValidationError("edges must be sorted and duplicate-free")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def adjacency(self):
        """CSR adjacency (indptr, indices) over simple edges, neighbor
        lists sorted ascending; self-loops are dropped here but still
        count toward degree_sequence."""
        if "csr" not in self._csr:
            simple = self.edges[self.edges[:, 0] != self.edges[:, 1]]
            us = np.concatenate([simple[:, 0], simple[:, 1]])
            vs = np.concatenate([simple[:, 1], simple[:, 0]])
            order = np.lexsort((vs, us))
            indices = vs[order]
            counts = np.bincount(us, minlength=self.n)
            indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
            self._csr["csr"] = (indptr, indices.astype(np.int64))
        return self._csr["csr"]


def degree_sequence(graph: Graph) -> np.ndarray:
    """Per-node degree; sums to 2 * num_edges (self-edges count twice)."""
    both = np.concatenate([graph.edges[:, 0], graph.edges[:, 1]])
    return np.bincount(both, minlength=graph.n)


@dataclass(frozen=True)
class BucketIndex:
    """Nodes grouped by identical attribute vector.

    vectors: (K, l) distinct rows in lexicographic order; nodes holding
    vectors[k] are members(k).
    """

    vectors: np.ndarray
    counts: np.ndarray
    _order: np.ndarray
    _starts: np.ndarray

    @classmethod
    def build(cls, attrs: AttributeAssignment) -> "BucketIndex":
        vectors, inverse, counts = np.unique(
            attrs.values, axis=0, return_inverse=True, return_counts=True
        )
        order = np.argsort(inverse, kind="stable")
        starts = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        return cls(vectors, counts.astype(np.int64), order.astype(np.int64), starts)

    @property
    def num_buckets(self) -> int:
        return len(self.counts)

    def members(self, k: int) -> np.ndarray:
        return self._order[self._starts[k]: self._starts[k + 1]]

    def items(self):
        for k in range(self.num_buckets):
            yield tuple(self.vectors[k]), self.members(k)


def _simplified_pair_table(config: MagConfig) -> np.ndarray:
    """Edge probability indexed by shared counts:
    table[n0 * (l+1) + n1] = alpha^n0 * beta^(l-n0-n1) * gamma^n1."""
    l, t = config.l, config.theta
    table = np.zeros((l + 1) * (l + 1))
    la, lb, lg = math.log(t.alpha), math.log(t.beta), math.log(t.gamma)
    for n0 in range(l + 1):
        for n1 in range(l + 1 - n0):
            if config.use_log_space:
                v = math.exp(n0 * la + (l - n0 - n1) * lb + n1 * lg)
            else:
                v = t.alpha**n0 * t.beta ** (l - n0 - n1) * t.gamma**n1
            table[n0 * (l + 1) + n1] = v
    return table


def _attribute_tables(config: MagConfig):
    """Per-attribute affinity entries flattened row-major, with offsets;
    log entries in the log-space regime."""
    mats = config.matrices()
    dims = np.asarray(config.dims, dtype=np.int64)
    flat = [np.asarray(m, dtype=np.float64).ravel() for m in mats]
    if config.use_log_space:
        flat = [np.log(f) for f in flat]
    toffs = np.concatenate([[0], np.cumsum([f.size for f in flat])[:-1]])
    return np.concatenate(flat), dims, toffs.astype(np.int64)


def _check_budget(config: MagConfig, max_cells: int | None):
    budget = DEFAULT_NAIVE_CELL_BUDGET if max_cells is None else max_cells
    if config.n * config.l > budget:
        raise CapacityError(
            f"n*l = {config.n * config.l} exceeds naive-path budget {budget}"
        )


def generate_naive(config: MagConfig, attrs: AttributeAssignment, seed: int,
                   max_cells: int | None = None) -> Graph:
    """Visit every unordered pair (plus self-pairs when enabled) and keep
    it with probability edge_probability.  Deterministic given the seed."""
    validate_assignment(config, attrs)
    _check_budget(config, max_cells)
    if config.variant == "simplified":
        table = _simplified_pair_table(config)
        us, vs = kernels.naive_edges_table(
            attrs.packed(), config.l, table, seed, config.self_edges
        )
    else:
        tables, dims, toffs = _attribute_tables(config)
        us, vs = kernels.naive_edges_general(
            attrs.values, dims, tables, toffs, config.use_log_space,
            seed, config.self_edges,
        )
    edges = np.column_stack([us, vs])
    return Graph(config.n, edges, config.self_edges)


def generate_bucketed(config: MagConfig, attrs: AttributeAssignment,
                      seed: int) -> Graph:
    """Distributionally identical to generate_naive; cost scales with the
    number of buckets squared plus edges drawn."""
    validate_assignment(config, attrs)
    index = BucketIndex.build(attrs)
    tables, dims, toffs = _attribute_tables(config)
    pair_idx, pos = kernels.bucketed_emit(
        index.vectors, dims, tables, toffs, config.use_log_space,
        index.counts, seed, config.self_edges,
    )
    us, vs = _decode_emissions(pair_idx, pos, index, config.self_edges)
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    order = np.lexsort((hi, lo))
    edges = np.column_stack([lo[order], hi[order]])
    return Graph(config.n, edges, config.self_edges)


def _invert_triangular(idx: np.ndarray, K: int) -> np.ndarray:
    """Row bi of the upper-triangle-with-diagonal linearization
    idx = bi*(2K - bi + 1)/2 + (bj - bi)."""
    t = 2 * K + 1
    bi = ((t - np.sqrt(t * t - 8.0 * idx)) // 2).astype(np.int64)
    bi = np.clip(bi, 0, K - 1)
    for _ in range(2):  # fix float rounding, off by at most one per pass
        base = bi * (2 * K - bi + 1) // 2
        bi -= base > idx
        base = bi * (2 * K - bi + 1) // 2
        bi += idx >= base + (K - bi)
    return bi


def _invert_strict_triangular(idx: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Row i of the strict upper-triangle linearization (i < j, no diagonal)
    idx = i*c - i*(i+1)/2 + (j - i - 1), per-element sizes c."""
    t = 2 * c - 1
    i = ((t - np.sqrt(t * t - 8.0 * idx)) // 2).astype(np.int64)
    i = np.clip(i, 0, np.maximum(c - 2, 0))
    for _ in range(2):
        base = i * c - i * (i + 1) // 2
        i -= base > idx
        base = i * c - i * (i + 1) // 2
        i += idx >= base + (c - i - 1)
    return i


def _decode_emissions(pair_idx, pos, index: BucketIndex, self_edges: bool):
    """Map (bucket-pair index, position in the implicit pair list) to node
    pairs.  Cross pairs enumerate the size_i x size_j grid row-major; same-
    bucket pairs enumerate the strict upper triangle, then self slots."""
    if pair_idx.size == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z
    K = index.num_buckets
    counts, order, starts = index.counts, index._order, index._starts
    bi = _invert_triangular(pair_idx, K)
    bj = bi + (pair_idx - bi * (2 * K - bi + 1) // 2)

    u_loc = np.empty_like(pos)
    v_loc = np.empty_like(pos)
    cross = bi != bj
    if cross.any():
        cv = counts[bj[cross]]
        u_loc[cross] = pos[cross] // cv
        v_loc[cross] = pos[cross] % cv
    diag = ~cross
    if diag.any():
        c = counts[bi[diag]]
        tri = c * (c - 1) // 2
        p = pos[diag]
        is_pair = p < tri
        i_loc = np.zeros_like(p)
        j_loc = np.zeros_like(p)
        if is_pair.any():
            cp = c[is_pair]
            pp = p[is_pair]
            i = _invert_strict_triangular(pp, cp)
            i_loc[is_pair] = i
            j_loc[is_pair] = pp - (i * cp - i * (i + 1) // 2) + i + 1
        if (~is_pair).any():
            if not self_edges:
                raise ValidationError("emission beyond pair list")
            self_slot = p[~is_pair] - tri[~is_pair]
            i_loc[~is_pair] = self_slot
            j_loc[~is_pair] = self_slot
        u_loc[diag] = i_loc
        v_loc[diag] = j_loc

    us = order[starts[bi] + u_loc]
    vs = order[starts[bj] + v_loc]
    return us, vs


def write_edge_list(graph: Graph, path) -> None:
    """Edge-list format: '#' header lines carrying the node count and the
    self-edge policy, then one sorted "u<TAB>v" line per edge."""
    with open(path, "w") as fh:
        fh.write(f"# nodes {graph.n}\n")
        fh.write(f"# self_edges {1 if graph.self_edges_allowed else 0}\n")
        for u, v in graph.edges:
            fh.write(f"{u}\t{v}\n")


def read_edge_list(path) -> Graph:
    n = None
    self_edges = None
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "nodes":
                    n = int(parts[1])
                elif len(parts) == 2 and parts[0] == "self_edges":
                    self_edges = parts[1] == "1"
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 'u<TAB>v'")
            rows.append((int(parts[0]), int(parts[1])))
    if n is None or self_edges is None:
        raise ValidationError(
            f"{path}: missing '# nodes <n>' or '# self_edges <0|1>' header"
        )
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2)
    return Graph(n, edges, self_edges)
