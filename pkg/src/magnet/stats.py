"""Distribution fitting and theory-vs-simulation comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import theory
from .core import MagConfig, sample_attributes
from .errors import InsufficientDataError, ValidationError
from .generate import generate_bucketed, generate_naive
from .metrics import (
    DegreeDistribution,
    connected_components,
    effective_diameter,
)

MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple
    r_squared: float
    n_points: int
    residual_norm: float


@dataclass(frozen=True)
class TrialSummary:
    seeds: int
    mean: float
    std_error: float
    successes: int


def _polyfit(x: np.ndarray, y: np.ndarray, degree: int) -> FitResult:
    coeffs = np.polyfit(x, y, degree)
    pred = np.polyval(coeffs, x)
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 and ss_res == 0 else 1.0 - ss_res / max(ss_tot, 1e-300)
    return FitResult(tuple(coeffs), max(0.0, min(1.0, r2)), len(x),
                     math.sqrt(ss_res))


def fit_loglog_quadratic(dist: DegreeDistribution, tail_cutoff: int) -> FitResult:
    """Least squares of ln p_k = a (ln k)^2 + b ln k + c over degrees at or
    above the cutoff."""
    keep = (dist.degrees >= max(tail_cutoff, 1)) & (dist.pdf > 0)
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need >= {MIN_FIT_POINTS} tail degrees, have {int(keep.sum())}"
        )
    x = np.log(dist.degrees[keep].astype(float))
    y = np.log(dist.pdf[keep])
    return _polyfit(x, y, 2)


def implied_lognormal(fit: FitResult):
    """Log-normal (mean, variance) implied by a quadratic log-log fit.

    The degree pmf carries a 1/k density correction relative to the
    log-normal in ln k, so ln p_k = -(ln k - M)^2 / (2 V) - ln k + const,
    giving V = -1/(2a) and M = (b + 1) V.
    """
    a, b = fit.coefficients[0], fit.coefficients[1]
    if a >= 0:
        return float("nan"), float("nan")
    variance = -1.0 / (2.0 * a)
    return (b + 1.0) * variance, variance


def fit_loglog_linear(xs, ys, k_min: float = 1.0) -> FitResult:
    """Least-squares slope/intercept of ln y against ln x above k_min."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs >= k_min) & (ys > 0) & (xs > 0)
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need >= {MIN_FIT_POINTS} points above k_min, have {int(keep.sum())}"
        )
    return _polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)


def median_degree(dist: DegreeDistribution) -> int:
    """Smallest degree whose CDF reaches 1/2 (the tail-fit cutoff)."""
    cdf = np.cumsum(dist.pdf)
    return int(dist.degrees[np.searchsorted(cdf, 0.5)])


def log_binned_pdf(dist: DegreeDistribution, raw_max: int = 32,
                   ratio: float = 1.25):
    """Degree pdf re-binned for tail fitting: unit bins up to raw_max,
    geometric bins above; returns bin centers and per-unit-degree densities.
    """
    degrees = dist.degrees
    edges = list(range(1, min(raw_max, int(degrees.max())) + 2))
    hi = edges[-1]
    while hi <= degrees.max():
        hi = max(hi + 1, int(math.ceil(hi * ratio)))
        edges.append(hi)
    edges = np.asarray(edges)
    centers, densities = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (degrees >= lo) & (degrees < hi)
        mass = dist.pdf[mask].sum()
        if mass > 0:
            centers.append(math.sqrt(lo * (hi - 1)))
            densities.append(mass / (hi - lo))
    return np.asarray(centers), np.asarray(densities)


def generate_graphs(config: MagConfig, seeds, path: str = "bucketed"):
    """One graph per seed; the seed drives both the attribute table and the
    edge draws (through independent substreams)."""
    gen = {"bucketed": generate_bucketed, "naive": generate_naive}.get(path)
    if gen is None:
        raise ValidationError(f"unknown generation path {path!r}")
    for s in seeds:
        attrs = sample_attributes(config, s)
        yield gen(config, attrs, s)


def _seed_list(seeds, base_seed: int) -> list:
    if isinstance(seeds, int):
        return [base_seed + i for i in range(seeds)]
    return list(seeds)


def compare_edge_counts(config: MagConfig, seeds, path: str = "bucketed",
                        base_seed: int = 0):
    """Monte Carlo mean edge count versus the closed form; returns the
    trial summary and the z-score of the discrepancy."""
    seed_list = _seed_list(seeds, base_seed)
    if len(seed_list) < 2:
        raise InsufficientDataError("need at least 2 seeds")
    counts = np.array(
        [g.num_edges for g in generate_graphs(config, seed_list, path)],
        dtype=float,
    )
    mean = counts.mean()
    se = counts.std(ddof=1) / math.sqrt(len(counts))
    z = (mean - theory.expected_edges(config)) / se if se > 0 else math.inf
    return TrialSummary(len(counts), float(mean), float(se),
                        len(counts)), float(z)


def tv_distance(p, q) -> float:
    """Total variation distance between two degree distributions."""
    pm = _as_map(p)
    qm = _as_map(q)
    support = set(pm) | set(qm)
    return 0.5 * sum(abs(pm.get(k, 0.0) - qm.get(k, 0.0)) for k in support)


def _as_map(obj) -> dict:
    if isinstance(obj, DegreeDistribution):
        return {int(k): float(v) for k, v in zip(obj.degrees, obj.pdf)}
    if isinstance(obj, dict):
        return {int(k): float(v) for k, v in obj.items()}
    arr = np.asarray(obj, dtype=float)
    return {k: float(v) for k, v in enumerate(arr) if v != 0.0}


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks on ties."""
    return float(np.corrcoef(_ranks(np.asarray(x, float)),
                             _ranks(np.asarray(y, float)))[0, 1])


def _ranks(v: np.ndarray) -> np.ndarray:
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v))
    sv = v[order]
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i: j + 1]] = 0.5 * (i + j)
        i = j + 1
    return ranks


PROPERTY_CRITERIA = {
    "giant": lambda cfg: theory.giant_component_criterion(cfg)[0],
    "connected": lambda cfg: theory.connectivity_criterion(cfg)[0],
    "diameter": lambda cfg: theory.diameter_criterion(cfg)[0],
}


@dataclass(frozen=True)
class ScanResult:
    values: tuple
    summaries: tuple
    analytic_values: tuple
    empirical_crossing: float | None
    analytic_crossing: float | None
    monotone: bool


def threshold_scan(values, build_config, prop: str, seeds: int,
                   base_seed: int = 0, diameter_bound: float = 10.0,
                   diameter_sources: int = 64) -> ScanResult:
    """Success fraction of a structural property along a one-parameter
    sweep, with the analytic criterion alongside.

    Properties: "giant" (largest component >= n/2), "connected",
    "diameter" (sampled effective diameter <= bound).  The empirical
    crossing is the first sweep value with success fraction >= 1/2 and is
    undefined when the profile dips back below 1/2 afterwards; the
    analytic crossing is where the matching criterion crosses 1/2.
    """
    if prop not in PROPERTY_CRITERIA:
        raise ValidationError(f"unknown property {prop!r}")
    criterion = PROPERTY_CRITERIA[prop]
    summaries = []
    fractions = []
    analytic = []
    for vi, value in enumerate(values):
        config = build_config(value)
        analytic.append(criterion(config))
        hits = 0
        for si in range(seeds):
            seed = base_seed + vi * 10_000 + si
            attrs = sample_attributes(config, seed)
            graph = generate_bucketed(config, attrs, seed)
            if prop == "giant":
                ok = connected_components(graph)[0] >= config.n / 2
            elif prop == "connected":
                ok = len(connected_components(graph)) == 1
            else:
                try:
                    d = effective_diameter(graph, mode="sampled",
                                           sources=diameter_sources, seed=seed)
                    ok = d <= diameter_bound
                except ValidationError:
                    ok = False
            hits += bool(ok)
        frac = hits / seeds
        fractions.append(frac)
        summaries.append(TrialSummary(
            seeds, frac, math.sqrt(frac * (1 - frac) / seeds), hits
        ))

    crossing = None
    for value, frac in zip(values, fractions):
        if frac >= 0.5:
            crossing = value
            break
    seen = False
    for frac in fractions:
        if frac >= 0.5:
            seen = True
        elif seen:
            crossing = None  # profile dipped back, crossing undefined
            break
    return ScanResult(
        tuple(values),
        tuple(summaries),
        tuple(analytic),
        crossing,
        _analytic_crossing(values, analytic, build_config, criterion),
        all(b >= a for a, b in zip(fractions, fractions[1:])),
    )


def _analytic_crossing(values, analytic, build_config, criterion):
    """Sweep value where the criterion crosses 1/2: bisection inside the
    bracketing grid cell, or linear interpolation when the sweep axis only
    admits grid values (integer n)."""
    for (v0, a0), (v1, a1) in zip(zip(values, analytic),
                                  zip(values[1:], analytic[1:])):
        if (a0 - 0.5) * (a1 - 0.5) > 0:
            continue
        lo, hi, f_lo = v0, v1, a0 - 0.5
        try:
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                if (criterion(build_config(mid)) - 0.5) * f_lo > 0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        except Exception:
            if a1 == a0:
                return v0
            return v0 + (0.5 - a0) * (v1 - v0) / (a1 - a0)
    return None
