"""Centralized ML oracle for the prior scale b.

The network cost sum_i f(b; n_i, sigma_i) is minimised over log b:

1. a 64-point log-uniform scan over [1e-6, 1e6] * b_hom brackets the best
   grid point and counts the local minima seen on the grid;
2. golden-section search (scipy) refines inside the bracket;
3. a Brent root solve on the summed gradient polishes the result to
   relative tolerance 1e-10 whenever the bracket straddles a sign change.
"""

from __future__ import annotations

import contextlib
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from poissonnet.core.model import (
    FloatArray,
    NetworkData,
    SufficientStats,
    as_stats,
    ml_cost,
    ml_gradient,
)
from poissonnet.exceptions import DegenerateDataError, DimensionMismatchError

logger = logging.getLogger(__name__)

SCAN_POINTS = 64
SCAN_SPAN = 1e6
RTOL = 1e-10
BISECTION_STEPS = 80


@dataclass(frozen=True, slots=True)
class MLSolution:
    """Result of the centralized ML search.

    Attributes:
        b: Minimiser of the network cost
        cost: Network cost at b
        n_local_minima: Local minima observed on the multistart grid
        bracket: Grid interval that contained the best point
    """

    b: float
    cost: float
    n_local_minima: int
    bracket: tuple[float, float]

    @property
    def unique(self) -> bool:
        return self.n_local_minima == 1


def _cost_on_grid(grid: FloatArray, n: FloatArray, sigma: FloatArray, a: float) -> FloatArray:
    values = ml_cost(grid[:, None], n[None, :], sigma[None, :], a)
    return np.asarray(values).sum(axis=1)


def solve_ml(n: FloatArray, sigma: FloatArray, a: float) -> MLSolution:
    """Minimise the network ML cost for one network.

    Args:
        n: Sample sizes, shape (N,)
        sigma: Count sums, shape (N,)
        a: Prior shape

    Returns:
        MLSolution with the global minimiser found

    Raises:
        DegenerateDataError: If sigma sums to zero (the cost has no minimiser)
    """
    n = np.asarray(n, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.shape != n.shape:
        raise DimensionMismatchError(n.shape[0], sigma.shape[0], "sigma")
    sigma_total = float(np.sum(sigma))
    if sigma_total <= 0:
        raise DegenerateDataError("centralized ML needs at least one arrival network-wide")

    b_hom = sigma_total / (a * float(np.sum(n)))
    log_grid = np.linspace(
        math.log(b_hom / SCAN_SPAN), math.log(b_hom * SCAN_SPAN), SCAN_POINTS
    )
    costs = _cost_on_grid(np.exp(log_grid), n, sigma, a)

    interior = (costs[1:-1] < costs[:-2]) & (costs[1:-1] <= costs[2:])
    n_minima = max(int(np.count_nonzero(interior)), 1)
    if n_minima > 1:
        logger.info("ML cost scan found %d local minima", n_minima)

    best = int(np.argmin(costs))
    lo = log_grid[max(best - 1, 0)]
    hi = log_grid[min(best + 1, SCAN_POINTS - 1)]

    def cost(theta: float) -> float:
        return float(np.sum(ml_cost(math.exp(theta), n, sigma, a)))

    def slope(theta: float) -> float:
        b = math.exp(theta)
        return b * float(np.sum(ml_gradient(b, n, sigma, a)))

    theta = float(log_grid[best])
    if lo < theta < hi:
        # scipy rejects brackets whose midpoint ties an endpoint; keep the grid point then.
        with contextlib.suppress(ValueError):
            result = minimize_scalar(cost, bracket=(lo, theta, hi), method="golden", tol=1e-9)
            if lo <= result.x <= hi and result.fun <= costs[best]:
                theta = float(result.x)

    if slope(lo) < 0 < slope(hi):
        theta = brentq(slope, lo, hi, xtol=1e-14, rtol=RTOL)

    b = math.exp(theta)
    return MLSolution(
        b=b,
        cost=cost(theta),
        n_local_minima=n_minima,
        bracket=(math.exp(lo), math.exp(hi)),
    )


def centralized_ml(data: NetworkData | SufficientStats, a: float) -> float:
    """Centralized ML estimate of b (the oracle the distributed runs target).

    Raises:
        DegenerateDataError: If the network saw no arrivals
    """
    stats = as_stats(data)
    return solve_ml(stats.n, stats.sigma, a).b


def centralized_ml_batch(stats: SufficientStats, a: float) -> FloatArray:
    """centralized_ml for every trial column of a (N, B) batch.

    In theta = log b every cost term -sigma_i theta + (sigma_i + a) log(1 + n_i e^theta)
    is convex, so the summed slope sum_i (a n_i b - sigma_i) / (n_i b + 1) is
    increasing and has a single root in the scan interval. All columns are
    bisected together until the interval collapses to adjacent floats.

    Raises:
        DegenerateDataError: If any trial saw no arrivals
    """
    sigma = stats.sigma if stats.sigma.ndim == 2 else stats.sigma[:, None]
    n = stats.n[:, None]
    totals = sigma.sum(axis=0)
    if np.any(totals <= 0):
        raise DegenerateDataError("centralized ML needs at least one arrival network-wide")

    b_hom = totals / (a * float(np.sum(n)))
    lo = np.log(b_hom / SCAN_SPAN)
    hi = np.log(b_hom * SCAN_SPAN)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        b = np.exp(mid)
        rising = np.sum((a * n * b - sigma) / (n * b + 1.0), axis=0) > 0
        hi = np.where(rising, mid, hi)
        lo = np.where(rising, lo, mid)
    return np.exp(0.5 * (lo + hi))
