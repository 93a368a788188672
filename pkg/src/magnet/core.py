"""Domain types, the edge-probability kernel, and attribute sampling.

The model: node u carries a vector of l categorical attributes; the
probability of an edge (u, v) is the product over attributes of the
affinity-matrix entry selected by the two endpoint values.  A node's
weight is the number of attributes on which it takes value 0, and for
binary attributes P(value 0) = mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import CapacityError, InvalidAssignmentError, ValidationError

# Beyond this many attributes, per-pair probabilities are handled in log
# space to avoid underflow; below it, plain products are exact enough.
LOG_SPACE_THRESHOLD = 32


@dataclass(frozen=True)
class AffinityMatrix:
    """A d x d matrix of link affinities, every entry strictly in (0, 1)."""

    entries: np.ndarray
    symmetric: bool = True

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise ValidationError("affinity matrix must be square and non-empty")
        if not (np.all(e > 0.0) and np.all(e < 1.0)):
            raise ValidationError("affinity entries must lie strictly in (0, 1)")
        if self.symmetric and not np.array_equal(e, e.T):
            raise ValidationError("affinity matrix flagged symmetric is not")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SimplifiedTheta:
    """Binary affinity triple: alpha on (0,0), beta off-diagonal, gamma on (1,1)."""

    alpha: float
    beta: float
    gamma: float
    core_periphery: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValidationError(f"{name}={v} must lie strictly in (0, 1)")
        if self.core_periphery and not (self.gamma < self.beta < self.alpha):
            raise ValidationError(
                "core-periphery affinity requires gamma < beta < alpha"
            )

    def as_matrix(self) -> AffinityMatrix:
        return AffinityMatrix(
            np.array([[self.alpha, self.beta], [self.beta, self.gamma]])
        )


@dataclass(frozen=True)
class MagConfig:
    """Full model parameterization.

    Variants: "simplified" (single mu and theta shared by all attributes),
    "powerlaw" (per-attribute mu_j und theta_j, binary), and "general"
    (per-attribute categorical distribution plus affinity matrix).
    """

    n: int
    l: int
    variant: str
    self_edges: bool = False
    mu: float | None = None
    theta: SimplifiedTheta | None = None
    mus: tuple[float, ...] | None = None
    thetas: tuple[SimplifiedTheta, ...] | None = None
    attrs: tuple[tuple[np.ndarray, AffinityMatrix], ...] | None = None

    def __post_init__(self):
        if self.n < 1 or self.l < 1:
            raise ValidationError("n and l must be positive")
        if self.variant not in ("simplified", "powerlaw", "general"):
            raise ValidationError(f"unknown variant {self.variant!r}")

    @classmethod
    def simplified(cls, n, l, mu, theta, self_edges=False):
        if not 0.0 <= mu <= 1.0:
            raise ValidationError("mu must lie in [0, 1]")
        if not isinstance(theta, SimplifiedTheta):
            theta = SimplifiedTheta(*theta)
        return cls(n=n, l=l, variant="simplified", mu=float(mu), theta=theta,
                   self_edges=self_edges)

    @classmethod
    def power_law(cls, n, mus, thetas, self_edges=False):
        if len(mus) != len(thetas):
            raise ValidationError("mus and thetas must have equal length")
        for m in mus:
            if not 0.0 <= m <= 1.0:
                raise ValidationError("every mu must lie in [0, 1]")
        thetas = tuple(
            t if isinstance(t, SimplifiedTheta) else SimplifiedTheta(*t)
            for t in thetas
        )
        return cls(n=n, l=len(mus), variant="powerlaw",
                   mus=tuple(float(m) for m in mus), thetas=thetas,
                   self_edges=self_edges)

    @classmethod
    def general(cls, n, attrs, self_edges=False):
        norm = []
        for dist, mat in attrs:
            d = np.asarray(dist, dtype=np.float64)
            if not isinstance(mat, AffinityMatrix):
                mat = AffinityMatrix(np.asarray(mat))
            if d.ndim != 1 or len(d) != mat.dim:
                raise ValidationError(
                    "distribution support size must equal affinity matrix dim"
                )
            if np.any(d < 0) or abs(d.sum() - 1.0) > 1e-9:
                raise ValidationError("attribute distribution must sum to 1")
            d.setflags(write=False)
            norm.append((d, mat))
        return cls(n=n, l=len(norm), variant="general", attrs=tuple(norm),
                   self_edges=self_edges)

    @property
    def rho(self) -> float:
        """Attribute-to-size ratio l / log2(n)."""
        if self.n < 2:
            raise ValidationError("rho requires n >= 2")
        return self.l / math.log2(self.n)

    @property
    def dims(self) -> tuple[int, ...]:
        if self.variant == "general":
            return tuple(mat.dim for _, mat in self.attrs)
        return (2,) * self.l

    @property
    def is_binary(self) -> bool:
        return all(d == 2 for d in self.dims)

    def mu_vector(self) -> np.ndarray:
        """P(value 0) per attribute (binary variants only)."""
        if self.variant == "simplified":
            return np.full(self.l, self.mu)
        if self.variant == "powerlaw":
            return np.asarray(self.mus)
        if self.is_binary:
            return np.array([dist[0] for dist, _ in self.attrs])
        raise ValidationError("mu_vector undefined for non-binary attributes")

    def distributions(self) -> list[np.ndarray]:
        if self.variant == "general":
            return [dist for dist, _ in self.attrs]
        return [np.array([m, 1.0 - m]) for m in self.mu_vector()]

    def matrices(self) -> list[np.ndarray]:
        if self.variant == "simplified":
            m = self.theta.as_matrix().entries
            return [m] * self.l
        if self.variant == "powerlaw":
            return [t.as_matrix().entries for t in self.thetas]
        return [mat.entries for _, mat in self.attrs]

    @property
    def use_log_space(self) -> bool:
        return self.l > LOG_SPACE_THRESHOLD


@dataclass(frozen=True)
class SharedCounts:
    """Counts of attribute positions where two binary rows agree."""

    both_zero: int
    both_one: int


@dataclass
class AttributeAssignment:
    """n x l table of 0-based category indices, one row per node."""

    values: np.ndarray
    _packed: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.uint8)
        if v.ndim != 2:
            raise ValidationError("attribute table must be 2-dimensional")
        v.setflags(write=False)
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def l(self) -> int:
        return self.values.shape[1]

    def row(self, u: int) -> np.ndarray:
        return self.values[u]

    def packed(self) -> np.ndarray:
        """Rows packed into uint64 words, little-endian bit order.

        Only meaningful for binary tables; kernels use this for
        word-parallel popcounts.
        """
        if self._packed is None:
            if self.values.max(initial=0) > 1:
                raise InvalidAssignmentError("cannot bit-pack non-binary values")
            words = (self.l + 63) // 64
            by = np.packbits(self.values, axis=1, bitorder="little")
            buf = np.zeros((self.n, words * 8), dtype=np.uint8)
            buf[:, : by.shape[1]] = by
            packed = buf.view(np.uint64)
            packed.setflags(write=False)
            self._packed = packed
        return self._packed

    def weights(self) -> np.ndarray:
        """Per-node weight: number of attributes with value 0."""
        return (self.values == 0).sum(axis=1)


def validate_assignment(config: MagConfig, attrs: AttributeAssignment) -> None:
    if attrs.n != config.n or attrs.l != config.l:
        raise InvalidAssignmentError(
            f"assignment shape {attrs.n}x{attrs.l} does not match "
            f"config {config.n}x{config.l}"
        )
    dims = np.asarray(config.dims, dtype=np.uint8)
    if np.any(attrs.values >= dims[np.newaxis, :]):
        raise InvalidAssignmentError("attribute value out of range for its matrix")


def sample_attributes(config: MagConfig, seed: int) -> AttributeAssignment:
    """Draw the attribute table; each column i is iid with P(value 0) = mu_i.

    Deterministic given the seed; column i consumes substream (seed, attr, i).
    """
    n = config.n
    values = np.empty((n, config.l), dtype=np.uint8)
    for i, dist in enumerate(config.distributions()):
        key = rng.stream_key(seed, rng.TAG_ATTR, i)
        u = rng.uniforms(key, 0, n)
        if len(dist) == 2:
            values[:, i] = u >= dist[0]
        else:
            edges = np.cumsum(dist)
            values[:, i] = np.searchsorted(edges, u, side="right").astype(np.uint8)
    return AttributeAssignment(values)


def _check_binary(row: np.ndarray) -> np.ndarray:
    row = np.asarray(row)
    if row.size and row.max() > 1:
        raise InvalidAssignmentError("row contains non-binary values")
    return row


def shared_counts(u_attrs, v_attrs) -> SharedCounts:
    """Count positions where both rows are 0 / both are 1."""
    u = _check_binary(u_attrs)
    v = _check_binary(v_attrs)
    if u.shape != v.shape:
        raise InvalidAssignmentError("rows must have equal length")
    both_zero = int(np.count_nonzero((u == 0) & (v == 0)))
    both_one = int(np.count_nonzero((u == 1) & (v == 1)))
    return SharedCounts(both_zero, both_one)


def node_weight(u_attrs) -> int:
    """Number of attributes taking value 0."""
    u = _check_binary(u_attrs)
    return int(np.count_nonzero(u == 0))


def edge_probability(u_attrs, v_attrs, config: MagConfig) -> float:
    """Product over attributes of the affinity entry the two rows select.

    For the simplified model this is computed as
    alpha^N0 * beta^(l-N0-N1) * gamma^N1 with (N0, N1) the shared counts;
    above LOG_SPACE_THRESHOLD attributes the product is accumulated in
    log space.
    """
    u = np.asarray(u_attrs)
    v = np.asarray(v_attrs)
    if u.shape != v.shape or u.ndim != 1 or len(u) != config.l:
        raise InvalidAssignmentError("rows must both have length l")
    dims = config.dims
    if any(u[i] >= dims[i] or v[i] >= dims[i] for i in range(config.l)):
        raise InvalidAssignmentError("attribute value out of range for its matrix")

    if config.variant == "simplified":
        c = shared_counts(u, v)
        t = config.theta
        if config.use_log_space:
            logp = (
                c.both_zero * math.log(t.alpha)
                + (config.l - c.both_zero - c.both_one) * math.log(t.beta)
                + c.both_one * math.log(t.gamma)
            )
            return math.exp(logp)
        return (
            t.alpha**c.both_zero
            * t.beta ** (config.l - c.both_zero - c.both_one)
            * t.gamma**c.both_one
        )

    mats = config.matrices()
    if config.use_log_space:
        logp = sum(math.log(mats[i][u[i], v[i]]) for i in range(config.l))
        return math.exp(logp)
    p = 1.0
    for i in range(config.l):
        p *= mats[i][u[i], v[i]]
    return p


def kronecker_to_mag(initiator, l: int):
    """Model whose edge probabilities equal the l-th tensor power of a 2x2
    initiator: node u's attribute vector is the l-bit binary representation
    of its id (most significant bit first).

    Returns the general-variant config on 2^l nodes plus the deterministic
    assignment.
    """
    if not isinstance(initiator, AffinityMatrix):
        initiator = AffinityMatrix(np.asarray(initiator), symmetric=False)
    if initiator.dim != 2:
        raise ValidationError("initiator must be 2x2")
    if l < 1:
        raise ValidationError("l must be >= 1")
    if l > 62:
        raise CapacityError("2^l node ids exceed 62-bit capacity")
    n = 1 << l
    ids = np.arange(n, dtype=np.uint64)
    shifts = np.arange(l - 1, -1, -1, dtype=np.uint64)
    values = ((ids[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
    dist = np.full(2, 0.5)
    config = MagConfig.general(n, [(dist, initiator)] * l)
    return config, AttributeAssignment(values)


def write_attributes(attrs: AttributeAssignment, path) -> None:
    """Text format: header "n l", then one row of space-separated values."""
    with open(path, "w") as fh:
        fh.write(f"{attrs.n} {attrs.l}\n")
        for row in attrs.values:
            fh.write(" ".join(str(int(x)) for x in row))
            fh.write("\n")


def read_attributes(path) -> AttributeAssignment:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValidationError(f"{path}:1: expected header 'n l'")
        n, l = int(header[0]), int(header[1])
        values = np.empty((n, l), dtype=np.uint8)
        for i in range(n):
            parts = fh.readline().split()
            if len(parts) != l:
                raise ValidationError(f"{path}:{i + 2}: expected {l} values")
            values[i] = [int(p) for p in parts]
    return AttributeAssignment(values)
