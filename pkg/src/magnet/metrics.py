"""Empirical structural statistics of generated graphs.

Conventions, fixed so golden values are stable:
  - effective diameter: linear interpolation of the cumulative distance
    distribution over connected ordered pairs excluding self-pairs
    (fractions are identical to the unordered convention);
  - hop plot: ordered pairs including self-pairs;
  - self-edges are ignored by distance/clustering/triad computations but
    still count toward degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import NumericalError, ValidationError
from .generate import Graph, degree_sequence


@dataclass(frozen=True)
class DegreeDistribution:
    """Empirical or theoretical degree law: pdf and P(deg >= k)."""

    degrees: np.ndarray
    pdf: np.ndarray
    ccdf: np.ndarray

    @classmethod
    def from_pmf(cls, pmf: np.ndarray) -> "DegreeDistribution":
        pmf = np.asarray(pmf, dtype=np.float64)
        degrees = np.flatnonzero(pmf > 0)
        p = pmf[degrees]
        ccdf = np.cumsum(p[::-1])[::-1]
        return cls(degrees.astype(np.int64), p, ccdf)

    @classmethod
    def from_degrees(cls, degrees: np.ndarray) -> "DegreeDistribution":
        counts = np.bincount(np.asarray(degrees, dtype=np.int64))
        return cls.from_pmf(counts / counts.sum())

    @classmethod
    def from_graph(cls, graph: Graph) -> "DegreeDistribution":
        return cls.from_degrees(degree_sequence(graph))

    def mean(self) -> float:
        return float(self.degrees @ self.pdf)


@dataclass(frozen=True)
class HopPlot:
    """Ordered reachable pairs (self included) within h hops."""

    points: tuple

    def saturation(self) -> int:
        return self.points[-1][1]


def connected_components(graph: Graph) -> np.ndarray:
    """Component sizes in descending order; sizes sum to n."""
    labels = kernels.union_find_labels(
        graph.n, graph.edges[:, 0], graph.edges[:, 1]
    )
    sizes = np.unique(labels, return_counts=True)[1]
    return np.sort(sizes)[::-1]


def largest_component_fraction(graph: Graph) -> float:
    return connected_components(graph)[0] / graph.n


def _distance_histogram(graph: Graph, sources: np.ndarray) -> np.ndarray:
    indptr, indices = graph.adjacency()
    return kernels.bfs_distance_histogram(indptr, indices, sources, graph.n)


def _pick_sources(n: int, count: int, seed: int) -> np.ndarray:
    if count >= n:
        return np.arange(n, dtype=np.int64)
    u = rng.uniforms(rng.stream_key(seed, rng.TAG_USER, 0), 0, n)
    return np.sort(np.argsort(u)[:count]).astype(np.int64)


def effective_diameter(graph: Graph, percentile: float = 0.9,
                       mode: str = "exact", sources: int = 256,
                       seed: int = 0) -> float:
    """Interpolated hop count at which the cumulative fraction of connected
    ordered pairs (self excluded) reaches the percentile.

    "exact" runs BFS from every node; "sampled" from `sources` uniformly
    chosen ones (with all sources it equals the exact value).
    """
    if not 0.0 < percentile < 1.0:
        raise ValidationError("percentile must lie in (0, 1)")
    if mode == "exact":
        src = np.arange(graph.n, dtype=np.int64)
    elif mode == "sampled":
        src = _pick_sources(graph.n, sources, seed)
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    hist = _distance_histogram(graph, src)
    total = int(hist.sum())
    if total == 0:
        raise ValidationError("effective diameter undefined: no connected pairs")
    target = percentile * total
    cum = np.cumsum(hist)
    h = int(np.searchsorted(cum, target))  # smallest h with cum[h] >= target
    below = cum[h - 1] if h > 0 else 0
    return (h - 1) + (target - below) / hist[h]


def hop_plot(graph: Graph, max_h: int | None = None) -> HopPlot:
    """Exact count of ordered pairs (u, v), u == v included, with
    distance(u, v) <= h, for h = 0 .. max_h (default: until saturation)."""
    hist = _distance_histogram(graph, np.arange(graph.n, dtype=np.int64))
    cum = graph.n + np.cumsum(hist)
    last = len(hist) - 1
    if max_h is None:
        max_h = last
    points = [(h, int(cum[min(h, last)])) for h in range(max_h + 1)]
    return HopPlot(tuple(points))


def node_triangles(graph: Graph) -> np.ndarray:
    """Exact per-node triangle counts by sorted adjacency intersection."""
    indptr, indices = graph.adjacency()
    t = np.zeros(graph.n, dtype=np.int64)
    simple = graph.edges[graph.edges[:, 0] != graph.edges[:, 1]]
    for u, v in simple:
        au = indices[indptr[u]: indptr[u + 1]]
        av = indices[indptr[v]: indptr[v + 1]]
        common = np.intersect1d(au, av, assume_unique=True)
        above = common[common > v]  # count each triangle at its lowest edge
        if above.size:
            t[u] += above.size
            t[v] += above.size
            np.add.at(t, above, 1)
    return t


def triad_participation(graph: Graph) -> dict:
    """Map triangle count -> number of nodes with that count."""
    counts = np.bincount(node_triangles(graph))
    return {int(k): int(c) for k, c in enumerate(counts) if c > 0}


def clustering_by_degree(graph: Graph) -> dict:
    """Mean local clustering coefficient per degree class.

    Local coefficient: triangles(u) / C(d_simple(u), 2), zero below degree
    2; the class key is the full degree (self-edges included).
    """
    tri = node_triangles(graph)
    indptr, _ = graph.adjacency()
    d_simple = np.diff(indptr)
    wedges = d_simple * (d_simple - 1) / 2
    local = np.divide(tri, wedges, out=np.zeros(graph.n), where=wedges > 0)
    degrees = degree_sequence(graph)
    out: dict = {}
    for deg in np.unique(degrees):
        out[int(deg)] = float(local[degrees == deg].mean())
    return out


def _matvec(indptr, indices, x):
    gathered = x[indices]
    prefix = np.concatenate([np.zeros((1,) + x.shape[1:]), np.cumsum(gathered, axis=0)])
    return prefix[indptr[1:]] - prefix[indptr[:-1]]


def top_singular(graph: Graph, k: int = 1, tol: float = 1e-6,
                 max_iter: int = 1000, seed: int = 0):
    """Top-k singular values of the adjacency matrix plus the magnitudes of
    the leading left singular vector's components, sorted descending.

    Subspace iteration on A^2 with Ritz extraction; matrix-free products
    against the adjacency lists.  Convergence requires
    ||A u - sigma v|| <= tol * sigma per returned triple.
    """
    if not 1 <= k <= graph.n:
        raise ValidationError(f"k must lie in [1, {graph.n}]")
    indptr, indices = graph.adjacency()
    n = graph.n
    u0 = rng.uniforms(rng.stream_key(seed, rng.TAG_USER, 1), 0, n * k)
    v = np.linalg.qr(u0.reshape(n, k) - 0.5)[0]

    best_resid = np.inf
    for _ in range(max_iter):
        av = _matvec(indptr, indices, v)
        aav = _matvec(indptr, indices, av)
        # Ritz values of A^2 on span(v): eig of (Av)^T (Av)
        gram = av.T @ av
        w, e = np.linalg.eigh(gram)
        order = np.argsort(w)[::-1]
        w, e = w[order], e[:, order]
        ritz_v = v @ e
        resid = np.linalg.norm(
            _matvec(indptr, indices, _matvec(indptr, indices, ritz_v))
            - ritz_v * w[None, :],
            axis=0,
        )
        scale = np.maximum(w, 1e-30)
        best_resid = min(best_resid, float((resid / scale).max()))
        if np.all(resid <= tol * scale):
            sigma = np.sqrt(np.maximum(w, 0.0))
            lead = ritz_v[:, 0]
            if sigma[0] > 0:
                lead = _matvec(indptr, indices, ritz_v[:, [0]])[:, 0] / sigma[0]
            return sigma, np.sort(np.abs(lead))[::-1]
        q, _ = np.linalg.qr(aav)
        if q.shape[1] < k:  # rank-deficient iterate, reseed missing columns
            pad = rng.uniforms(rng.stream_key(seed, rng.TAG_USER, 2), 0, n * k)
            q = np.linalg.qr(np.hstack([q, pad.reshape(n, k) - 0.5]))[0][:, :k]
        v = q
    raise NumericalError(
        f"top_singular did not converge within {max_iter} iterations",
        best_residual=best_resid,
    )


def write_xy_csv(path, metric: str, source: str, xs, ys) -> None:
    """Two-column CSV with a '#' header naming the metric and its input."""
    with open(path, "w") as fh:
        fh.write(f"# {metric} {source}\n")
        for x, y in zip(xs, ys):
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"
