"""Closed-form calculators and root solvers for the analytic results.

All criteria compare against 1/2; logs are base 2 unless a formula is
stated in natural log.  Functions are pure and operate on simplified
configs (single mu, theta) unless noted otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import MagConfig, SimplifiedTheta
from .errors import NumericalError, ValidationError

BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class AffinitySummary:
    """Weight-conditional factors of a simplified config.

    x = mu*alpha + (1-mu)*beta   (per-attribute factor for a 0-valued slot)
    y = mu*beta + (1-mu)*gamma   (factor for a 1-valued slot)
    zeta = mu^2*alpha + 2*mu*(1-mu)*beta + (1-mu)^2*gamma
    ratio = x / y
    lam = mu*beta / (mu*beta + (1-mu)*gamma)
    """

    x: float
    y: float
    zeta: float
    ratio: float
    lam: float


def _require_simplified(config: MagConfig) -> MagConfig:
    if config.variant != "simplified":
        raise ValidationError("operation requires a simplified config")
    return config


def summary(config: MagConfig) -> AffinitySummary:
    _require_simplified(config)
    mu, t = config.mu, config.theta
    x = mu * t.alpha + (1 - mu) * t.beta
    y = mu * t.beta + (1 - mu) * t.gamma
    zeta = mu * mu * t.alpha + 2 * mu * (1 - mu) * t.beta + (1 - mu) ** 2 * t.gamma
    return AffinitySummary(x=x, y=y, zeta=zeta, ratio=x / y,
                           lam=mu * t.beta / y if y > 0 else float("nan"))


def _zeta_per_attribute(config: MagConfig) -> list[float]:
    out = []
    for dist, mat in zip(config.distributions(), config.matrices()):
        out.append(float(dist @ mat @ dist))
    return out


def _self_factor_per_attribute(config: MagConfig) -> list[float]:
    out = []
    for dist, mat in zip(config.distributions(), config.matrices()):
        out.append(float(dist @ np.diag(mat)))
    return out


def expected_edges(config: MagConfig) -> float:
    """n(n-1)/2 * prod(zeta_i), plus n * prod(mu_i*alpha_i + (1-mu_i)*gamma_i)
    when self-edges are enabled."""
    n = config.n
    m = n * (n - 1) / 2 * math.prod(_zeta_per_attribute(config))
    if config.self_edges:
        m += n * math.prod(_self_factor_per_attribute(config))
    return m


def _check_weight(config: MagConfig, i: int) -> None:
    if not 0 <= i <= config.l:
        raise ValidationError(f"weight {i} outside [0, {config.l}]")


def expected_edge_prob_given_weight(config: MagConfig, i: int) -> float:
    """Mean edge probability against a random partner, given weight i: x^i y^(l-i)."""
    _check_weight(config, i)
    s = summary(config)
    return s.x**i * s.y ** (config.l - i)


def expected_degree_given_weight(config: MagConfig, i: int) -> float:
    """(n-1) x^i y^(l-i), plus 2 alpha^i gamma^(l-i) when self-edges count."""
    _check_weight(config, i)
    s = summary(config)
    d = (config.n - 1) * s.x**i * s.y ** (config.l - i)
    if config.self_edges:
        t = config.theta
        d += 2.0 * t.alpha**i * t.gamma ** (config.l - i)
    return d


def densification_exponent(config: MagConfig) -> float:
    """Exponent a in m ~ n^a at fixed rho: a = 2 + rho * log2(zeta)."""
    s = summary(config)
    return 2.0 + config.rho * math.log2(s.zeta)


def _verdict(value: float) -> str:
    if abs(value - 0.5) < BOUNDARY_EPS:
        return "boundary"
    return "holds" if value > 0.5 else "fails"


def giant_component_criterion(config: MagConfig):
    """[x^mu y^(1-mu)]^rho, compared against 1/2 (>= means a unique giant
    component; the boundary counts as holding)."""
    s = summary(config)
    mu = config.mu
    value = (s.x**mu * s.y ** (1 - mu)) ** config.rho
    return value, _verdict(value)


def giant_holds(config: MagConfig) -> bool:
    value, verdict = giant_component_criterion(config)
    return verdict in ("holds", "boundary")


def solve_min_weight_fraction(config: MagConfig, tol: float = 1e-12) -> float:
    """Root nu in (0, mu) of [(mu/nu)^nu ((1-mu)/(1-nu))^(1-nu)]^rho = 1/2.

    The bracketed function increases monotonically on (0, mu), so bisection
    is exact; only defined when (1-mu)^rho < 1/2.
    """
    mu, rho = config.mu, config.rho

    def log2_ratio(v):
        return v * (math.log2(mu) - math.log2(v)) + (1 - v) * (
            math.log2(1 - mu) - math.log2(1 - v)
        )

    target = -1.0 / rho
    lo, hi = 1e-300, mu
    if log2_ratio(mu * (1 - 1e-12)) < target:
        raise NumericalError("min-weight equation has no root below mu")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log2_ratio(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * 1e-4:
            break
    nu = 0.5 * (lo + hi)
    residual = abs(2.0 ** (rho * log2_ratio(nu)) - 0.5)
    if residual > 1e-10:
        raise NumericalError("min-weight solver residual too large",
                             best_residual=residual)
    return nu


def connectivity_criterion(config: MagConfig):
    """Connectedness criterion F_c and the minimum-weight fraction nu.

    F_c = y^rho when (1-mu)^rho >= 1/2, else [x^nu y^(1-nu)]^rho for the
    solved nu.  Connected when F_c > 1/2, disconnected when F_c < 1/2,
    boundary at equality.
    """
    s = summary(config)
    mu, rho = config.mu, config.rho
    if (1 - mu) ** rho >= 0.5:
        value = s.y**rho
        nu = None
    else:
        nu = solve_min_weight_fraction(config)
        value = (s.x**nu * s.y ** (1 - nu)) ** rho
    return value, nu, _verdict(value)


def diameter_criterion(config: MagConfig):
    """y^rho (constant diameter when > 1/2) and the core-weight fraction
    lambda = mu*beta / (mu*beta + (1-mu)*gamma)."""
    s = summary(config)
    value = s.y**config.rho
    return value, _verdict(value), s.lam


def lognormal_params(config: MagConfig):
    """Mean and variance of the limiting log-normal degree tail.

    mean = ln(n y^l) + l mu ln R + l mu (1-mu) (ln R)^2 / 2
    var  = l mu (1-mu) (ln R)^2

    Warns (but still evaluates) outside the assumption band R in [1.6, 3]
    or when the giant-component criterion fails.
    """
    s = summary(config)
    if not 1.6 <= s.ratio <= 3.0:
        warnings.warn(
            f"affinity ratio {s.ratio:.4g} outside [1.6, 3]; log-normal "
            "approximation may be poor",
            stacklevel=2,
        )
    if not giant_holds(config):
        warnings.warn(
            "giant-component criterion fails; log-normal tail not guaranteed",
            stacklevel=2,
        )
    mu, l = config.mu, config.l
    ln_r = math.log(s.ratio)
    variance = l * mu * (1 - mu) * ln_r**2
    mean = math.log(config.n * s.y**l) + l * mu * ln_r + variance / 2
    return mean, variance


def _log_factorials(n: int) -> np.ndarray:
    return np.array([math.lgamma(i + 1.0) for i in range(n + 1)])


def _log_binomial_weights(l: int, mu: float) -> np.ndarray:
    """log of Binomial(l, mu) pmf over j = 0..l (weight of a node)."""
    if mu == 0.0 or mu == 1.0:
        w = np.full(l + 1, -np.inf)
        w[l if mu == 1.0 else 0] = 0.0
        return w
    lf = _log_factorials(l)
    j = np.arange(l + 1)
    return lf[l] - lf[j] - lf[l - j] + j * math.log(mu) + (l - j) * math.log1p(-mu)


def theoretical_degree_pmf(config: MagConfig, k_max: int | None = None) -> np.ndarray:
    """Exact degree pmf: a Binomial(l, mu) mixture of Binomial(n-1, E_j)
    with E_j = x^j y^(l-j), evaluated in log space.

    Self-edges must be disabled; returns p_k for k = 0..k_max
    (default n-1).
    """
    _require_simplified(config)
    if config.self_edges:
        raise ValidationError("degree pmf is defined for self-edge-free graphs")
    n, l = config.n, config.l
    if k_max is None:
        k_max = n - 1
    if not 0 <= k_max <= n - 1:
        raise ValidationError(f"k_max {k_max} outside [0, {n - 1}]")

    s = summary(config)
    k = np.arange(k_max + 1)
    lf = _log_factorials(n - 1)
    log_choose = lf[n - 1] - lf[k] - lf[n - 1 - k]

    log_w = _log_binomial_weights(l, config.mu)
    log_e = np.arange(l + 1) * math.log(s.x) + (l - np.arange(l + 1)) * math.log(s.y)
    e = np.exp(log_e)

    # (l+1, k_max+1) matrix of log component masses, combined by max-shift
    terms = (
        log_w[:, None]
        + log_choose[None, :]
        + k[None, :] * log_e[:, None]
        + (n - 1 - k)[None, :] * np.log1p(-e)[:, None]
    )
    peak = terms.max(axis=0)
    with np.errstate(invalid="ignore"):
        out = peak + np.log(np.exp(terms - peak[None, :]).sum(axis=0))
    return np.where(np.isfinite(peak), np.exp(out), 0.0)


def solve_powerlaw_config(
    n: int,
    thetas,
    delta: float,
    self_edges: bool = False,
    tol: float = 1e-12,
) -> MagConfig:
    """Per-attribute mu_j solving mu/(1-mu) = (x_j/y_j)^(-delta).

    Each theta must be core-periphery (alpha > beta > gamma) so x_j > y_j;
    the left side rises from 0 to infinity while the right side stays inside
    (0, 1), so a bisection root always exists.  The returned config obeys
    the condition with residual <= 1e-10 per attribute.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    thetas = [
        t if isinstance(t, SimplifiedTheta) else SimplifiedTheta(*t) for t in thetas
    ]
    for t in thetas:
        if not t.gamma < t.beta < t.alpha:
            raise ValidationError(
                "solve_powerlaw_config requires core-periphery thetas"
            )
    mus = [_solve_condition_mu(t, delta, tol) for t in thetas]
    return MagConfig.power_law(n, mus, thetas, self_edges=self_edges)


def _solve_condition_mu(t: SimplifiedTheta, delta: float, tol: float) -> float:
    def f(mu):
        x = mu * t.alpha + (1 - mu) * t.beta
        y = mu * t.beta + (1 - mu) * t.gamma
        return math.log(mu / (1 - mu)) + delta * math.log(x / y)

    lo, hi = 1e-300, 1.0 - 1e-16
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    x = mu * t.alpha + (1 - mu) * t.beta
    y = mu * t.beta + (1 - mu) * t.gamma
    residual = abs(mu / (1 - mu) - (x / y) ** (-delta))
    if residual > 1e-10:
        raise NumericalError("power-law condition residual too large",
                             best_residual=residual)
    return mu


def powerlaw_condition_residuals(config: MagConfig, delta: float) -> np.ndarray:
    """Per-attribute residual |mu/(1-mu) - (x/y)^(-delta)|."""
    if config.variant != "powerlaw":
        raise ValidationError("requires a power-law config")
    mus = np.asarray(config.mus)
    x = np.array([m * t.alpha + (1 - m) * t.beta for m, t in zip(mus, config.thetas)])
    y = np.array([m * t.beta + (1 - m) * t.gamma for m, t in zip(mus, config.thetas)])
    return np.abs(mus / (1 - mus) - (x / y) ** (-delta))


def powerlaw_vector_probability(config: MagConfig, attrs_row) -> float:
    """Probability a node draws exactly this attribute vector."""
    row = _powerlaw_row(config, attrs_row)
    p = 1.0
    for bit, mu in zip(row, config.mus):
        p *= 1 - mu if bit else mu
    return p


def powerlaw_expected_degree(config: MagConfig, attrs_row) -> float:
    """(n-1) * prod over attributes of x_i (bit 0) or y_i (bit 1)."""
    row = _powerlaw_row(config, attrs_row)
    d = float(config.n - 1)
    for bit, mu, t in zip(row, config.mus, config.thetas):
        x = mu * t.alpha + (1 - mu) * t.beta
        y = mu * t.beta + (1 - mu) * t.gamma
        d *= y if bit else x
    return d


def _powerlaw_row(config: MagConfig, attrs_row) -> np.ndarray:
    if config.variant != "powerlaw":
        raise ValidationError("requires a power-law config")
    row = np.asarray(attrs_row)
    if row.shape != (config.l,):
        raise ValidationError("row length must equal l")
    if row.max(initial=0) > 1:
        raise ValidationError("power-law rows are binary")
    return row


def powerlaw_ladder_thetas(l: int, delta: float, z: float, alpha: float = 0.8):
    """Core-periphery thetas whose solved config has geometrically spaced
    expected-degree levels: attribute i gets x_i/y_i = (1+z)^(2^i), so the
    2^l per-vector expected degrees form a ladder with consecutive ratio
    (1+z)^2 and every level distinct.

    theta_i = (alpha, alpha/R_i, alpha/R_i^2) keeps the ratio x/y = R_i
    independent of mu.
    """
    if z <= 0:
        raise ValidationError("z must be positive")
    out = []
    for i in range(1, l + 1):
        log_r = (2**i) * math.log1p(z)
        if log_r > math.log(alpha) + 700:
            raise ValidationError(f"z={z} too large for l={l}: gamma underflows")
        r = math.exp(log_r)
        out.append(SimplifiedTheta(alpha, alpha / r, alpha / r**2))
    return out


@dataclass
class TheoryReport:
    """Bundle of closed-form quantities and threshold verdicts for a config."""

    expected_edges: float
    densification_exponent: float
    giant_criterion: float
    connectivity_value: float
    nu: float | None
    diameter_criterion: float
    lam: float
    lognormal_mean: float
    lognormal_variance: float
    verdicts: dict


def theory_report(config: MagConfig) -> TheoryReport:
    _require_simplified(config)
    giant_value, giant_v = giant_component_criterion(config)
    conn_value, nu, conn_v = connectivity_criterion(config)
    diam_value, diam_v, lam = diameter_criterion(config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ln_mean, ln_var = lognormal_params(config)
    return TheoryReport(
        expected_edges=expected_edges(config),
        densification_exponent=densification_exponent(config),
        giant_criterion=giant_value,
        connectivity_value=conn_value,
        nu=nu,
        diameter_criterion=diam_value,
        lam=lam,
        lognormal_mean=ln_mean,
        lognormal_variance=ln_var,
        verdicts={"giant": giant_v, "connected": conn_v, "constant_diameter": diam_v},
    )


def format_theory_report(report: TheoryReport) -> str:
    """Flat key=value block, one quantity per line, 17 significant digits."""
    lines = []
    for key in (
        "expected_edges",
        "densification_exponent",
        "giant_criterion",
        "connectivity_value",
        "nu",
        "diameter_criterion",
        "lam",
        "lognormal_mean",
        "lognormal_variance",
    ):
        v = getattr(report, key)
        if v is None:
            continue
        lines.append(f"{key}={v:.17g}")
    for name, verdict in report.verdicts.items():
        lines.append(f"verdict_{name}={verdict}")
    return "\n".join(lines) + "\n"


def parse_theory_report(text: str) -> TheoryReport:
    values: dict = {"nu": None}
    verdicts: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        key, _, raw = line.partition("=")
        if key.startswith("verdict_"):
            verdicts[key[len("verdict_"):]] = raw
        else:
            values[key] = float(raw)
    return TheoryReport(verdicts=verdicts, **values)
