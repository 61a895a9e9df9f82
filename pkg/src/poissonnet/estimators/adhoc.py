"""Ad-hoc distributed estimator: push-sum on (sigma, n) with shrinkage readout.

Every node starts from s_i(0) = sigma_i and eta_i(0) = n_i and repeatedly
mixes both with the push-sum weights. The ratio s_i / (a eta_i) converges
to the homogeneous estimate sigma / (a n) at every node, and each node
plugs its current ratio into its posterior-mean readout.

States hold arrays with the node axis first; passing SufficientStats with
sigma of shape (N, B) runs B independent trials on the same schedule.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from poissonnet.core.model import (
    FloatArray,
    NetworkData,
    SufficientStats,
    as_stats,
    homogeneous_estimate,
    local_estimate,
    shrinkage,
)
from poissonnet.estimators.readout import Readout, Trace, consensus_residual
from poissonnet.exceptions import DegenerateDataError, DimensionMismatchError, DomainError
from poissonnet.graph.schedule import GraphSchedule, WeightMatrix, weight_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class AdHocState:
    """Push-sum state of the ad-hoc estimator at round t.

    Attributes:
        s: Mixed count numerators s_i(t)
        eta: Mixed sample-size weights eta_i(t)
        b_hat: Local hyperparameter estimates s_i / (a eta_i)
        lambda_hat: Shrinkage readouts of the rates
        t: Round index
        excluded: 1-based id of a node whose data is withheld, if any
    """

    s: FloatArray
    eta: FloatArray
    b_hat: FloatArray
    lambda_hat: FloatArray
    t: int
    excluded: int | None = None

    @property
    def N(self) -> int:
        return int(self.s.shape[0])


def _donor(node: int, N: int) -> int:
    """0-based index of the node lending its estimate to an excluded node."""
    if N < 2:
        raise DomainError("N", N, "excluding a node needs N >= 2")
    return node % N


def adhoc_init(
    data: NetworkData | SufficientStats, a: float, excluded: int | None = None
) -> AdHocState:
    """Initial state s(0) = sigma, eta(0) = n with guarded local estimates.

    Args:
        data: Network data or a batch of sufficient statistics
        a: Prior shape
        excluded: Optional 1-based node whose counts are not pushed; it starts
            from the estimate of the next node and reads its own ratio once
            mass reaches it

    Returns:
        The state at t = 0
    """
    stats = as_stats(data)
    n = stats.n_column
    s = np.array(stats.sigma, dtype=np.float64)
    eta = np.array(np.broadcast_to(n, s.shape), dtype=np.float64)
    b_hat = np.array(local_estimate(n, s, a), dtype=np.float64)
    if excluded is not None:
        if not 1 <= excluded <= stats.N:
            raise DomainError("excluded", excluded, f"1 <= node <= {stats.N}")
        row = excluded - 1
        s[row] = 0.0
        eta[row] = 0.0
        b_hat[row] = b_hat[_donor(excluded, stats.N)]
    lambda_hat = np.asarray(shrinkage(b_hat, n, stats.sigma, a))
    return AdHocState(s=s, eta=eta, b_hat=b_hat, lambda_hat=lambda_hat, t=0, excluded=excluded)


def adhoc_step(
    st: AdHocState, W: WeightMatrix, data: NetworkData | SufficientStats, a: float
) -> AdHocState:
    """One synchronous push-sum round.

    A node whose mixed numerator or weight is zero keeps its previous
    estimate (only possible before any mass has reached it).

    Raises:
        DimensionMismatchError: If W does not match the state
    """
    if W.N != st.N:
        raise DimensionMismatchError(st.N, W.N, "weight matrix")
    stats = as_stats(data)
    s = W.entries @ st.s
    eta = W.entries @ st.eta
    b_hat = np.divide(s, a * eta, out=np.array(st.b_hat), where=(s > 0) & (eta > 0))
    lambda_hat = np.asarray(shrinkage(b_hat, stats.n_column, stats.sigma, a))
    return AdHocState(
        s=s, eta=eta, b_hat=b_hat, lambda_hat=lambda_hat, t=st.t + 1, excluded=st.excluded
    )


def adhoc_run(
    data: NetworkData | SufficientStats,
    sched: GraphSchedule,
    a: float,
    T: int,
    record: Readout | None = None,
    excluded: int | None = None,
) -> Trace[AdHocState]:
    """Run T rounds on the schedule and record readouts.

    Returns:
        Trace with the recorded rounds; ``trace.final`` is the state at T

    Raises:
        DomainError: If T < 0
        DimensionMismatchError: If the schedule and data disagree on N
    """
    if T < 0:
        raise DomainError("T", T, "T >= 0")
    stats = as_stats(data)
    if sched.N != stats.N:
        raise DimensionMismatchError(stats.N, sched.N, "schedule")
    record = record or Readout()
    rows = record.indices(stats.N)

    st = adhoc_init(stats, a, excluded=excluded)
    trace: Trace[AdHocState] = Trace(nodes=tuple(int(r) + 1 for r in rows))
    trace.record(0, rows, st.b_hat, st.lambda_hat)
    for W in weight_sequence(sched, T):
        st = adhoc_step(st, W, stats, a)
        if record.wants(st.t, T):
            trace.record(st.t, rows, st.b_hat, st.lambda_hat)
    trace.final = st
    logger.debug(
        "ad-hoc run finished after %d rounds, residual %s", T, consensus_residual(st.b_hat)
    )
    return trace


def adhoc_limit(data: NetworkData | SufficientStats, a: float) -> tuple[FloatArray, FloatArray]:
    """Closed-form consensus values of the ad-hoc estimator.

    Returns:
        (b_hom, lambda_hat): b_hom = sigma / (a n) (a scalar array, or one
        value per trial) and lambda_i = sigma / (a n + sigma n_i) (a + sigma_i)

    Raises:
        DegenerateDataError: If the network saw no arrivals
    """
    stats = as_stats(data)
    b_hom = np.asarray(homogeneous_estimate(stats, a), dtype=np.float64)
    if np.any(b_hom <= 0):
        raise DegenerateDataError("sigma = 0: the ad-hoc limit is not in the open domain")
    lambda_hat = np.asarray(shrinkage(b_hom, stats.n_column, stats.sigma, a))
    return b_hom, lambda_hat
