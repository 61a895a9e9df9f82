"""Gamma-Poisson model of a monitoring network.

Each monitor i observes n_i counts y_{i,l} ~ Poisson(lambda_i), with the
rates drawn i.i.d. from a shape-scale Gamma(a, b) prior. All inference
uses only the sufficient statistics (n_i, sigma_i = sum_l y_{i,l}).

The closed forms in this module accept scalars or numpy arrays for the
per-node arguments so the estimators can evaluate them over whole
networks, or over batches of Monte Carlo trials stored column-wise.

Example:
    >>> hp = HyperParams(a=10.0, b=1.0)
    >>> data = sample_network(hp, [50, 50, 1, 1], seed=7)
    >>> decentralized_estimate(data.monitors[0])  # sigma_1 / n_1
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from poissonnet.core.seeding import make_rng
from poissonnet.exceptions import (
    CountOverflowError,
    DimensionMismatchError,
    DomainError,
    InvalidSampleSizesError,
)

FloatArray: TypeAlias = NDArray[np.float64]
Real: TypeAlias = float | FloatArray

INT64_MAX = (1 << 63) - 1

# Floor applied to b before evaluating the ML gradient inside iterations.
B_MIN = 1e-9


# =============================================================================
# Domain Types
# =============================================================================


@dataclass(frozen=True, slots=True)
class HyperParams:
    """Gamma prior on the arrival rates.

    Attributes:
        a: Prior shape, known to every node
        b: Prior scale, the hyperparameter the network estimates
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError("a", self.a, "a > 0")
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError("b", self.b, "b > 0")

    @property
    def prior_mean(self) -> float:
        return self.a * self.b

    @property
    def prior_mode(self) -> float:
        """Mode (a - 1) b of the Gamma prior, clipped at zero for a < 1."""
        return max(self.a - 1.0, 0.0) * self.b


@dataclass(frozen=True, slots=True)
class MonitorData:
    """Counts collected by one monitor.

    ``n_i`` and ``sigma_i`` are derived from ``counts`` at construction, so
    sigma_i == sum(counts) and n_i == len(counts) always hold.

    Attributes:
        node_id: 1-based node index
        counts: The measurements y_{i,1}, ..., y_{i,n_i}
        n_i: Number of measurements
        sigma_i: Sum of the measurements
    """

    node_id: int
    counts: tuple[int, ...]
    n_i: int = field(init=False)
    sigma_i: int = field(init=False)

    def __post_init__(self) -> None:
        if self.node_id < 1:
            raise DomainError("node_id", self.node_id, "node ids start at 1")
        if not self.counts:
            raise InvalidSampleSizesError(f"Monitor {self.node_id} has no measurements")
        if any(y < 0 for y in self.counts):
            raise DomainError("counts", min(self.counts), "counts are non-negative")
        total = sum(self.counts)
        if total > INT64_MAX:
            raise CountOverflowError(f"Monitor {self.node_id}: sigma_i={total} overflows int64")
        object.__setattr__(self, "n_i", len(self.counts))
        object.__setattr__(self, "sigma_i", total)


@dataclass(frozen=True, slots=True)
class NetworkData:
    """One realisation of the monitoring network.

    Attributes:
        monitors: Per-node data, ordered by node id
        lambdas: True rates (visible to the harness only)
        N: Number of nodes
        n_total: Total number of measurements n
        sigma_total: Total count sigma
    """

    monitors: tuple[MonitorData, ...]
    lambdas: tuple[float, ...]
    N: int = field(init=False)
    n_total: int = field(init=False)
    sigma_total: int = field(init=False)
    n: FloatArray = field(init=False, compare=False, repr=False)
    sigma: FloatArray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.monitors:
            raise InvalidSampleSizesError("A network needs at least one monitor")
        if len(self.lambdas) != len(self.monitors):
            raise DimensionMismatchError(len(self.monitors), len(self.lambdas), "lambdas")
        if any(not lam > 0 for lam in self.lambdas):
            raise DomainError("lambdas", min(self.lambdas), "all rates are positive")
        sigma_total = sum(m.sigma_i for m in self.monitors)
        if sigma_total > INT64_MAX:
            raise CountOverflowError(f"sigma={sigma_total} overflows int64")
        object.__setattr__(self, "N", len(self.monitors))
        object.__setattr__(self, "n_total", sum(m.n_i for m in self.monitors))
        object.__setattr__(self, "sigma_total", sigma_total)
        object.__setattr__(self, "n", np.array([m.n_i for m in self.monitors], dtype=np.float64))
        object.__setattr__(
            self, "sigma", np.array([m.sigma_i for m in self.monitors], dtype=np.float64)
        )

    @property
    def sample_sizes(self) -> list[int]:
        return [m.n_i for m in self.monitors]

    @property
    def rates(self) -> FloatArray:
        return np.asarray(self.lambdas, dtype=np.float64)


@dataclass(frozen=True, slots=True, eq=False)
class SufficientStats:
    """Sufficient statistics for one network or a batch of trials.

    ``sigma`` has shape (N,) for a single network or (N, B) for B trials
    sharing the same sample sizes; the estimators broadcast over the
    trailing axis.
    """

    n: FloatArray
    sigma: FloatArray

    def __post_init__(self) -> None:
        if self.n.ndim != 1:
            raise DimensionMismatchError(1, self.n.ndim, "sample-size vector rank")
        if self.sigma.shape[0] != self.n.shape[0]:
            raise DimensionMismatchError(self.n.shape[0], self.sigma.shape[0], "sigma")

    @property
    def N(self) -> int:
        return int(self.n.shape[0])

    @property
    def n_column(self) -> FloatArray:
        """Sample sizes shaped to broadcast against ``sigma``."""
        return self.n.reshape((-1,) + (1,) * (self.sigma.ndim - 1))

    @classmethod
    def stack(cls, networks: Sequence[NetworkData]) -> SufficientStats:
        """Stack networks with identical sample sizes into a (N, B) batch."""
        first = networks[0].n
        for net in networks[1:]:
            if not np.array_equal(net.n, first):
                raise InvalidSampleSizesError("Stacked networks must share sample sizes")
        return cls(n=first, sigma=np.stack([net.sigma for net in networks], axis=1))


def as_stats(data: NetworkData | SufficientStats) -> SufficientStats:
    """View NetworkData as SufficientStats (no copy)."""
    if isinstance(data, SufficientStats):
        return data
    return SufficientStats(n=data.n, sigma=data.sigma)


def without_node(stats: SufficientStats, node: int | None) -> SufficientStats:
    """Drop one node's counts, e.g. to pool hyperparameter data without it.

    Args:
        stats: Statistics with the node axis first.
        node: 1-based node to drop, or None to keep everything.

    Raises:
        DomainError: If the node does not exist or is the only one.
    """
    if node is None:
        return stats
    if not 1 <= node <= stats.N or stats.N < 2:
        raise DomainError("node", node, f"1 <= node <= {stats.N} with N >= 2")
    return SufficientStats(
        n=np.delete(stats.n, node - 1), sigma=np.delete(stats.sigma, node - 1, axis=0)
    )


# =============================================================================
# Sampling
# =============================================================================


def sample_network(
    hp: HyperParams,
    sample_sizes: Sequence[int],
    seed: int | np.random.SeedSequence,
    pinned_rates: Mapping[int, float] | None = None,
) -> NetworkData:
    """Draw rates and counts for one network.

    Rates are drawn i.i.d. Gamma(a, b) (numpy's shape-scale sampler, valid
    for any a > 0), then every count is Poisson(lambda_i). Identical seeds
    give bit-identical output.

    Args:
        hp: Prior hyperparameters
        sample_sizes: n_i for each node
        seed: Root seed or a derived SeedSequence
        pinned_rates: Optional {node_id: rate} overrides; the full rate
            vector is still drawn so the random stream does not shift

    Returns:
        The sampled NetworkData

    Raises:
        InvalidSampleSizesError: If sample_sizes is empty or has entries < 1
    """
    sizes = [int(s) for s in sample_sizes]
    if not sizes:
        raise InvalidSampleSizesError("sample_sizes is empty")
    if min(sizes) < 1:
        raise InvalidSampleSizesError(f"sample sizes must be >= 1, got {min(sizes)}")

    rng = make_rng(seed)
    lambdas = rng.gamma(shape=hp.a, scale=hp.b, size=len(sizes))
    for node_id, rate in (pinned_rates or {}).items():
        if not 1 <= node_id <= len(sizes):
            raise DomainError("pinned node", node_id, f"1 <= node <= {len(sizes)}")
        if not rate > 0:
            raise DomainError("pinned rate", rate, "rate > 0")
        lambdas[node_id - 1] = rate
    # Gamma draws underflow to 0.0 only for tiny shapes; keep rates positive.
    lambdas = np.maximum(lambdas, np.finfo(np.float64).tiny)

    counts = rng.poisson(np.repeat(lambdas, sizes)).astype(np.int64)
    per_node = np.split(counts, np.cumsum(sizes)[:-1])
    monitors = tuple(
        MonitorData(node_id=i + 1, counts=tuple(int(y) for y in chunk))
        for i, chunk in enumerate(per_node)
    )
    return NetworkData(monitors=monitors, lambdas=tuple(float(x) for x in lambdas))


# =============================================================================
# Closed forms
# =============================================================================


def _require_positive(name: str, value: Real) -> None:
    arr = np.asarray(value)
    if not np.all(arr > 0):
        raise DomainError(name, float(np.min(arr)), f"{name} > 0")


def decentralized_estimate(m: MonitorData) -> float:
    """Local sample mean sigma_i / n_i."""
    return m.sigma_i / m.n_i


def local_estimate(n_i: Real, sigma_i: Real, a: float) -> Real:
    """Single-node ML estimate of b, guarded against zero counts.

    Returns max(sigma_i, 1) / (a n_i): the stationary point of the node's
    own cost term, floored so the estimate stays in the open domain.
    """
    return np.maximum(sigma_i, 1.0) / (a * np.asarray(n_i, dtype=np.float64))


def ml_cost(b: Real, n_i: Real, sigma_i: Real, a: float) -> Real:
    """Per-node ML cost f(b; n_i, sigma_i) = a log b - (sigma_i + a) log(b / (n_i b + 1)).

    Evaluated in the equivalent form -sigma_i log b + (sigma_i + a) log1p(n_i b).

    Raises:
        DomainError: If b <= 0
    """
    _require_positive("b", b)
    b_arr = np.asarray(b, dtype=np.float64)
    value = -np.asarray(sigma_i) * np.log(b_arr) + (np.asarray(sigma_i) + a) * np.log1p(
        np.asarray(n_i) * b_arr
    )
    return float(value) if np.ndim(value) == 0 else value


def ml_gradient(b: Real, n_i: Real, sigma_i: Real, a: float) -> Real:
    """Analytic derivative df/db = (a n_i b - sigma_i) / (b (n_i b + 1)).

    This is the exact derivative of ``ml_cost``; scaling it by ``a`` moves
    no stationary point.

    Raises:
        DomainError: If b <= 0
    """
    _require_positive("b", b)
    b_arr = np.asarray(b, dtype=np.float64)
    n_arr = np.asarray(n_i, dtype=np.float64)
    value = (a * n_arr * b_arr - np.asarray(sigma_i)) / (b_arr * (n_arr * b_arr + 1.0))
    return float(value) if np.ndim(value) == 0 else value


def network_cost(b: float, n: FloatArray, sigma: FloatArray, a: float) -> float:
    """Sum of ml_cost over nodes."""
    return float(np.sum(ml_cost(b, n, sigma, a)))


def network_gradient(b: float, n: FloatArray, sigma: FloatArray, a: float) -> float:
    """Sum of ml_gradient over nodes."""
    return float(np.sum(ml_gradient(b, n, sigma, a)))


def log_marginal(m: MonitorData, b: float, a: float) -> float:
    """Log of the negative-binomial marginal p(y_i | b) of one monitor.

    log Gamma(sigma_i + a) - log Gamma(a) - a log b - sum log y! +
    (sigma_i + a) log(b / (n_i b + 1)).

    Raises:
        DomainError: If b <= 0
    """
    _require_positive("b", b)
    counts = np.asarray(m.counts, dtype=np.float64)
    return float(
        gammaln(m.sigma_i + a)
        - gammaln(a)
        - a * math.log(b)
        - np.sum(gammaln(counts + 1.0))
        + (m.sigma_i + a) * (math.log(b) - math.log1p(m.n_i * b))
    )


def posterior_params(m: MonitorData, b: float, a: float) -> tuple[float, float]:
    """Shape and scale of the Gamma posterior of lambda_i given y_i.

    Raises:
        DomainError: If b <= 0
    """
    _require_positive("b", b)
    return m.sigma_i + a, b / (m.n_i * b + 1.0)


def shrinkage(b_hat: Real, n_i: Real, sigma_i: Real, a: float) -> Real:
    """Vectorised posterior-mean readout b / (b n_i + 1) (a + sigma_i).

    Raises:
        DomainError: If any b_hat <= 0
    """
    _require_positive("b_hat", b_hat)
    b_arr = np.asarray(b_hat, dtype=np.float64)
    value = b_arr / (b_arr * np.asarray(n_i) + 1.0) * (a + np.asarray(sigma_i))
    return float(value) if np.ndim(value) == 0 else value


def shrinkage_weight(b_hat: Real, n_i: Real) -> Real:
    """Weight rho = b n_i / (b n_i + 1) of the local mean in the readout."""
    prod = np.asarray(b_hat, dtype=np.float64) * np.asarray(n_i)
    value = prod / (prod + 1.0)
    return float(value) if np.ndim(value) == 0 else value


def mmse_estimate(m: MonitorData, b_hat: float, a: float) -> float:
    """Empirical Bayes MMSE estimate of lambda_i for a given b_hat.

    Equals rho sigma_i / n_i + (1 - rho) a b_hat with rho = b_hat n_i / (b_hat n_i + 1).

    Raises:
        DomainError: If b_hat <= 0
    """
    return float(shrinkage(b_hat, m.n_i, m.sigma_i, a))


def homogeneous_estimate(data: NetworkData | SufficientStats, a: float) -> Real:
    """Closed-form b_hom = sigma / (a n); one value per trial for batches.

    No zero-count guard: a network with sigma = 0 yields 0.0.
    """
    stats = as_stats(data)
    value = np.sum(stats.sigma, axis=0) / (a * float(np.sum(stats.n)))
    return float(value) if np.ndim(value) == 0 else value
