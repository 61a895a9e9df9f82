"""Exact tracking of the push-sum state-transition matrix.

Phi(0) = I and Phi(t + 1) = W(t) Phi(t), so the push-sum numerators obey
s(t) = Phi(t) s(0). The tracker also follows two diagnostics:

- delta: the largest within-row spread max_i max_{k,h} |phi_ik - phi_ih|,
  which bounds |phi_ik - phi_ih| entry-wise and is 0 exactly when every
  row is constant (the transpose of the usual ergodicity coefficient for
  row-stochastic products)
- mu_hat: the running minimum over time of the smallest row sum
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from poissonnet.core.model import FloatArray
from poissonnet.exceptions import DimensionMismatchError, DomainError
from poissonnet.graph.schedule import WeightMatrix


@dataclass(frozen=True, slots=True, eq=False)
class TransitionTracker:
    """Phi(t) together with its ergodicity diagnostics."""

    phi: FloatArray
    t: int
    delta: float
    mu_hat: float

    @property
    def N(self) -> int:
        return int(self.phi.shape[0])

    def row(self, node: int) -> FloatArray:
        """Row of Phi(t) for a 1-based node id."""
        return self.phi[node - 1]

    def column_sums(self) -> FloatArray:
        return self.phi.sum(axis=0)


def ergodicity_coefficient(phi: FloatArray) -> float:
    """Maximum within-row spread of a matrix; 0 for N = 1."""
    if phi.shape[1] < 2:
        return 0.0
    return float(np.max(phi.max(axis=1) - phi.min(axis=1)))


def min_row_sum(phi: FloatArray) -> float:
    return float(phi.sum(axis=1).min())


def tracker_init(N: int) -> TransitionTracker:
    """Tracker at t = 0 with Phi(0) = I."""
    if N < 1:
        raise DomainError("N", N, "N >= 1")
    phi = np.eye(N)
    return TransitionTracker(phi=phi, t=0, delta=ergodicity_coefficient(phi), mu_hat=1.0)


def tracker_step(tr: TransitionTracker, W: WeightMatrix) -> TransitionTracker:
    """Advance to Phi(t + 1) = W(t) Phi(t).

    Raises:
        DimensionMismatchError: If W does not match the tracked dimension
    """
    if W.N != tr.N:
        raise DimensionMismatchError(tr.N, W.N, "weight matrix")
    phi = W.entries @ tr.phi
    return TransitionTracker(
        phi=phi,
        t=tr.t + 1,
        delta=ergodicity_coefficient(phi),
        mu_hat=min(tr.mu_hat, min_row_sum(phi)),
    )
