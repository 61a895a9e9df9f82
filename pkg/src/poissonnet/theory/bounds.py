"""Variance bounds for the hyperparameter estimators.

- crb: Cramer-Rao bound (b/a) / sum n_i/(n_i b + 1)
- var_bhom: steady-state variance of sigma/(a n)
- var_bhom_transient: variance of node i's ad-hoc estimate at round t,
  computed from row i of the transition matrix
- var_bhom_bound: ergodicity bound on the transient-to-steady gap
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from poissonnet.core.model import FloatArray, HyperParams, Real
from poissonnet.exceptions import (
    DegenerateDataError,
    DimensionMismatchError,
    DomainError,
    InvalidSampleSizesError,
)

# Slack on delta in [0, 1] for spreads computed in floating point.
DELTA_TOL = 1e-12


def _sizes(sample_sizes: Sequence[int] | FloatArray) -> FloatArray:
    n = np.asarray(sample_sizes, dtype=np.float64)
    if n.ndim != 1 or n.size == 0:
        raise InvalidSampleSizesError("sample_sizes must be a non-empty vector")
    if np.any(n < 1):
        raise InvalidSampleSizesError(f"sample sizes must be >= 1, got {n.min()}")
    return n


def crb(hp: HyperParams, sample_sizes: Sequence[int] | FloatArray) -> float:
    """Cramer-Rao bound on the variance of unbiased estimators of b."""
    n = _sizes(sample_sizes)
    return float((hp.b / hp.a) / np.sum(n / (n * hp.b + 1.0)))


def crb_asymptote(hp: HyperParams, n_max: int, N: int) -> float:
    """Upper bound (b/a)(n_max b + 1)/N on the CRB of N nodes with n_i <= n_max."""
    if N < 1:
        raise DomainError("N", N, "N >= 1")
    return hp.b / hp.a * (n_max * hp.b + 1.0) / N


def var_bhom(hp: HyperParams, sample_sizes: Sequence[int] | FloatArray) -> float:
    """Variance b/(a n) + (b^2/(a n^2)) sum n_i^2 of the homogeneous estimator."""
    n = _sizes(sample_sizes)
    total = float(np.sum(n))
    return hp.b / (hp.a * total) + hp.b**2 * float(np.sum(n**2)) / (hp.a * total**2)


def var_bhom_transient(
    hp: HyperParams, sample_sizes: Sequence[int] | FloatArray, phi_row: FloatArray
) -> Real:
    """Variance of b_hom_i(t) given row i of Phi(t).

    ``phi_row`` may be a single row (N,) or a stack of rows (..., N), in
    which case one value per row is returned.

    Raises:
        DimensionMismatchError: If the row length does not match the sample sizes
        DegenerateDataError: If sum_k phi_ik n_k = 0
    """
    n = _sizes(sample_sizes)
    phi = np.asarray(phi_row, dtype=np.float64)
    if phi.shape[-1] != n.size:
        raise DimensionMismatchError(n.size, phi.shape[-1], "phi row")
    denom = np.sum(phi * n, axis=-1)
    if np.any(denom <= 0):
        raise DegenerateDataError("sum_k phi_ik n_k must be positive")
    phi_sq = phi**2
    value = (
        hp.b / hp.a * np.sum(phi_sq * n, axis=-1) + hp.b**2 / hp.a * np.sum(phi_sq * n**2, axis=-1)
    ) / denom**2
    return float(value) if np.ndim(value) == 0 else value


def var_bhom_bound(hp: HyperParams, n_max: int, mu: float, delta: Real) -> Real:
    """Right-hand side b (1 + 2 b n_max) / (mu a) delta of the ergodicity bound.

    Raises:
        DomainError: If mu <= 0 or delta lies outside [0, 1]
    """
    if not mu > 0:
        raise DomainError("mu", mu, "mu > 0")
    d = np.asarray(delta, dtype=np.float64)
    if np.any(d < -DELTA_TOL) or np.any(d > 1.0 + DELTA_TOL):
        raise DomainError("delta", float(d.max() if np.any(d > 1) else d.min()), "0 <= delta <= 1")
    value = hp.b * (1.0 + 2.0 * hp.b * n_max) / (mu * hp.a) * d
    return float(value) if np.ndim(value) == 0 else value
