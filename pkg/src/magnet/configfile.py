"""Flat key=value config files.

Model configs name a variant plus its parameters; experiment files add a
sweep axis, sweep values, and seed counts.  '#' starts a comment.  Errors
carry the offending line number.

Keys (simplified):      n, l | rho, mu, alpha, beta, gamma, self_edges
          f-scaled:     f, alpha0, beta0, gamma0  (theta = f * theta0)
Keys (powerlaw):        n, l | rho, delta plus per-attribute alpha_i,
                        beta_i, gamma_i (1-based), or ladder_z/ladder_alpha
                        to build the geometric-ladder affinities; explicit
                        mu_i entries bypass the condition solver.
Keys (general):         n, dist_i (comma probabilities), matrix_i (comma
                        row-major entries), self_edges.
Experiment keys:        sweep = mu|alpha|f|n|none, values (comma list),
                        seeds, seed_base, metrics (subset of
                        edges,lcc,diameter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AffinityMatrix, MagConfig, SimplifiedTheta
from .errors import ValidationError
from .theory import powerlaw_ladder_thetas, solve_powerlaw_config


def parse_kv_file(path) -> dict:
    """Map key -> (raw value, line number)."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ValidationError(f"{path}:{lineno}: expected key=value")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key in out:
                raise ValidationError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = (value.strip(), lineno)
    return out


class _KV:
    def __init__(self, raw: dict, path):
        self.raw = dict(raw)
        self.path = path
        self.used = set()

    def _get(self, key, default=None, required=False):
        if key not in self.raw:
            if required:
                raise ValidationError(f"{self.path}: missing required key {key!r}")
            return default, None
        self.used.add(key)
        return self.raw[key]

    def _convert(self, key, conv, default=None, required=False):
        value, lineno = self._get(key, default=None, required=required)
        if value is None:
            return default
        try:
            return conv(value)
        except (TypeError, ValueError):
            raise ValidationError(
                f"{self.path}:{lineno}: bad value for {key!r}: {value!r}"
            ) from None

    def get_int(self, key, default=None, required=False):
        return self._convert(key, int, default, required)

    def get_float(self, key, default=None, required=False):
        return self._convert(key, float, default, required)

    def get_str(self, key, default=None, required=False):
        value, _ = self._get(key, default=default, required=required)
        return value

    def get_bool(self, key, default=False):
        value, lineno = self._get(key)
        if value is None:
            return default
        if value not in ("0", "1"):
            raise ValidationError(f"{self.path}:{lineno}: {key} must be 0 or 1")
        return value == "1"

    def get_floats(self, key, required=False):
        value, lineno = self._get(key, required=required)
        if value is None:
            return None
        try:
            return [float(p) for p in value.replace(",", " ").split()]
        except ValueError:
            raise ValidationError(
                f"{self.path}:{lineno}: bad number list for {key!r}"
            ) from None

    def has(self, key):
        return key in self.raw


def resolve_l(kv: _KV, n: int) -> tuple[int, float | None]:
    """l directly, or from rho (rounded half up); returns (l, requested rho)."""
    if kv.has("l"):
        return kv.get_int("l", required=True), kv.get_float("rho")
    rho = kv.get_float("rho")
    if rho is None:
        raise ValidationError(f"{kv.path}: need either l or rho")
    return int(math.floor(rho * math.log2(n) + 0.5)), rho


def build_config(raw: dict, path) -> MagConfig:
    kv = _KV(raw, path)
    variant = kv.get_str("variant", default="simplified")
    n = kv.get_int("n", required=True)
    self_edges = kv.get_bool("self_edges")

    if variant == "simplified":
        l, _ = resolve_l(kv, n)
        theta = _simplified_theta(kv)
        return MagConfig.simplified(n, l, kv.get_float("mu", required=True),
                                    theta, self_edges=self_edges)

    if variant == "powerlaw":
        l, _ = resolve_l(kv, n)
        if kv.has("ladder_z"):
            thetas = powerlaw_ladder_thetas(
                l,
                kv.get_float("delta", required=True),
                kv.get_float("ladder_z", required=True),
                kv.get_float("ladder_alpha", default=0.8),
            )
        else:
            thetas = [
                SimplifiedTheta(
                    kv.get_float(f"alpha_{i}", required=True),
                    kv.get_float(f"beta_{i}", required=True),
                    kv.get_float(f"gamma_{i}", required=True),
                )
                for i in range(1, l + 1)
            ]
        if kv.has("mu_1"):
            mus = [kv.get_float(f"mu_{i}", required=True) for i in range(1, l + 1)]
            return MagConfig.power_law(n, mus, thetas, self_edges=self_edges)
        delta = kv.get_float("delta", required=True)
        solved = solve_powerlaw_config(n, thetas, delta, self_edges=self_edges)
        return solved

    if variant == "general":
        attrs = []
        i = 1
        while kv.has(f"dist_{i}"):
            dist = kv.get_floats(f"dist_{i}", required=True)
            entries = kv.get_floats(f"matrix_{i}", required=True)
            d = len(dist)
            if len(entries) != d * d:
                raise ValidationError(
                    f"{path}: matrix_{i} needs {d * d} entries, got {len(entries)}"
                )
            mat = np.asarray(entries).reshape(d, d)
            attrs.append((dist, AffinityMatrix(mat, symmetric=bool(
                np.array_equal(mat, mat.T)))))
            i += 1
        if not attrs:
            raise ValidationError(f"{path}: general variant needs dist_1/matrix_1")
        return MagConfig.general(n, attrs, self_edges=self_edges)

    raise ValidationError(f"{path}: unknown variant {variant!r}")


def _simplified_theta(kv: _KV) -> SimplifiedTheta:
    if kv.has("f"):
        f = kv.get_float("f", required=True)
        return SimplifiedTheta(
            f * kv.get_float("alpha0", required=True),
            f * kv.get_float("beta0", required=True),
            f * kv.get_float("gamma0", required=True),
        )
    return SimplifiedTheta(
        kv.get_float("alpha", required=True),
        kv.get_float("beta", required=True),
        kv.get_float("gamma", required=True),
    )


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep axis over a base config, run for several seeds."""

    base: dict
    path: str
    sweep: str
    values: tuple
    seeds: int
    seed_base: int
    metrics: tuple

    def config_for(self, value) -> MagConfig:
        raw = dict(self.base)
        if self.sweep == "none":
            pass
        elif self.sweep == "n":
            raw["n"] = (str(int(value)), 0)
            if "rho" in raw:  # fixed-rho evolution: recompute l per n
                raw.pop("l", None)
        elif self.sweep in ("mu", "alpha", "f"):
            raw[self.sweep] = (repr(float(value)), 0)
        else:
            raise ValidationError(f"unknown sweep axis {self.sweep!r}")
        return build_config(raw, self.path)


def build_experiment(raw: dict, path) -> ExperimentSpec:
    kv = _KV(raw, path)
    sweep = kv.get_str("sweep", default="none")
    if sweep not in ("mu", "alpha", "f", "n", "none"):
        raise ValidationError(f"{path}: sweep must be one of mu|alpha|f|n|none")
    if sweep == "f" and not kv.has("alpha0"):
        raise ValidationError(f"{path}: f-sweep requires the theta0 baseline "
                              "(alpha0, beta0, gamma0)")
    values = kv.get_floats("values") if sweep != "none" else [0.0]
    if sweep != "none" and not values:
        raise ValidationError(f"{path}: sweep requires values=")
    metrics = tuple(
        (kv.get_str("metrics", default="edges,lcc,diameter")).replace(",", " ").split()
    )
    for m in metrics:
        if m not in ("edges", "lcc", "diameter"):
            raise ValidationError(f"{path}: unknown metric {m!r}")
    seeds = kv.get_int("seeds", default=1)
    if seeds < 1:
        raise ValidationError(f"{path}: seeds must be >= 1")
    base = {
        k: v for k, v in raw.items()
        if k not in ("sweep", "values", "seeds", "seed_base", "metrics")
    }
    spec = ExperimentSpec(
        base=base,
        path=str(path),
        sweep=sweep,
        values=tuple(values),
        seeds=seeds,
        seed_base=kv.get_int("seed_base", default=0),
        metrics=metrics,
    )
    for value in spec.values:  # validate every sweep point eagerly
        spec.config_for(value)
    return spec
