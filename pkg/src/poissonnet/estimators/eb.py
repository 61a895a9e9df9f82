"""Empirical Bayes distributed estimator via subgradient-push.

Each node i holds (v_i, y_i, x_i), starting from (x_i0, 1, x_i0) with x_i0
its guarded local estimate. A round mixes x and y with the push-sum
weights, reads b_i = v_i / y_i, and takes a diminishing gradient step on
its own cost term:

    v(t+1) = W(t) x(t)
    y(t+1) = W(t) y(t)
    b_i    = max(v_i / y_i, B_MIN)
    x_i    = v_i - gamma(t+1) grad f(b_i; n_i, sigma_i)

with each step gamma grad f_i bounded by max_rel_step * v_i.

All nodes reach the minimiser of the network cost, i.e. the centralized
ML estimate, and read out the Empirical Bayes posterior mean.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from poissonnet.core.model import (
    B_MIN,
    FloatArray,
    NetworkData,
    SufficientStats,
    as_stats,
    local_estimate,
    ml_gradient,
    shrinkage,
)
from poissonnet.estimators.readout import Readout, Trace, consensus_residual
from poissonnet.exceptions import DimensionMismatchError, DomainError
from poissonnet.graph.schedule import GraphSchedule, WeightMatrix, weight_sequence

logger = logging.getLogger(__name__)

DEFAULT_MAX_REL_STEP = 0.5


@dataclass(frozen=True, slots=True)
class StepSchedule:
    """Diminishing step sizes gamma(t) = gamma0 / t**exponent.

    Attributes:
        gamma0: Initial step size
        exponent: Decay exponent in (0.5, 1], so that the steps sum to
            infinity while their squares stay summable
        max_rel_step: Bound on each gradient step relative to the local
            mass, |gamma grad f_i| <= max_rel_step * v_i; None disables it.
            With the bound below 1 every x_i stays positive. It binds only
            while gamma(t) is large, so the limit is unchanged.
    """

    gamma0: float = 1.0
    exponent: float = 1.0
    max_rel_step: float | None = DEFAULT_MAX_REL_STEP

    def __post_init__(self) -> None:
        if not self.gamma0 > 0:
            raise DomainError("gamma0", self.gamma0, "gamma0 > 0")
        if not 0.5 < self.exponent <= 1.0:
            raise DomainError("exponent", self.exponent, "0.5 < exponent <= 1")
        if self.max_rel_step is not None and not 0 < self.max_rel_step < 1:
            raise DomainError("max_rel_step", self.max_rel_step, "0 < max_rel_step < 1 or None")

    def gamma(self, t: int) -> float:
        if t < 1:
            raise DomainError("t", t, "step sizes start at t = 1")
        return self.gamma0 / t**self.exponent


@dataclass(frozen=True, slots=True, eq=False)
class PushState:
    """Subgradient-push state at round t."""

    v: FloatArray
    y: FloatArray
    x: FloatArray
    b_hat: FloatArray
    lambda_hat: FloatArray
    t: int
    excluded: int | None = None

    @property
    def N(self) -> int:
        return int(self.x.shape[0])


def eb_init(
    data: NetworkData | SufficientStats, a: float, excluded: int | None = None
) -> PushState:
    """Initial state (v, y, x) = (x0, 1, x0) with x0 the guarded local estimates.

    An excluded node contributes no cost term; it starts from the estimate
    of the next node.
    """
    stats = as_stats(data)
    n = stats.n_column
    x0 = np.array(local_estimate(n, stats.sigma, a), dtype=np.float64)
    if excluded is not None:
        if not 1 <= excluded <= stats.N:
            raise DomainError("excluded", excluded, f"1 <= node <= {stats.N}")
        if stats.N < 2:
            raise DomainError("N", stats.N, "excluding a node needs N >= 2")
        x0[excluded - 1] = x0[excluded % stats.N]
    lambda_hat = np.asarray(shrinkage(x0, n, stats.sigma, a))
    return PushState(
        v=x0.copy(),
        y=np.ones_like(x0),
        x=x0,
        b_hat=x0.copy(),
        lambda_hat=lambda_hat,
        t=0,
        excluded=excluded,
    )


def eb_step(
    st: PushState,
    W: WeightMatrix,
    data: NetworkData | SufficientStats,
    a: float,
    gamma_next: float,
    max_rel_step: float | None = DEFAULT_MAX_REL_STEP,
) -> PushState:
    """One subgradient-push round.

    Args:
        st: Current state
        W: Push-sum weights of this round
        data: Network data or batch statistics
        a: Prior shape
        gamma_next: Step size gamma(t + 1); 0 reduces the round to push-sum
        max_rel_step: Bound on |gamma grad f_i| as a fraction of v_i, or None

    Raises:
        DimensionMismatchError: If W does not match the state
        DomainError: If gamma_next < 0
    """
    if W.N != st.N:
        raise DimensionMismatchError(st.N, W.N, "weight matrix")
    if gamma_next < 0:
        raise DomainError("gamma", gamma_next, "gamma >= 0")
    stats = as_stats(data)
    n = stats.n_column

    v = W.entries @ st.x
    y = W.entries @ st.y
    b_hat = np.maximum(v / y, B_MIN)
    step = gamma_next * np.asarray(ml_gradient(b_hat, n, stats.sigma, a))
    if max_rel_step is not None:
        bound = max_rel_step * np.abs(v)
        step = np.clip(step, -bound, bound)
    if st.excluded is not None:
        step[st.excluded - 1] = 0.0
    x = v - step
    lambda_hat = np.asarray(shrinkage(b_hat, n, stats.sigma, a))
    return PushState(
        v=v, y=y, x=x, b_hat=b_hat, lambda_hat=lambda_hat, t=st.t + 1, excluded=st.excluded
    )


def eb_run(
    data: NetworkData | SufficientStats,
    sched: GraphSchedule,
    a: float,
    steps: StepSchedule,
    T: int,
    record: Readout | None = None,
    excluded: int | None = None,
) -> Trace[PushState]:
    """Run T subgradient-push rounds and record readouts.

    The consensus residual of the final round is available through
    ``consensus_residual(trace.final.b_hat)`` and is logged at debug level.

    Raises:
        DomainError: If T < 1
        DimensionMismatchError: If the schedule and data disagree on N
    """
    if T < 1:
        raise DomainError("T", T, "T >= 1")
    stats = as_stats(data)
    if sched.N != stats.N:
        raise DimensionMismatchError(stats.N, sched.N, "schedule")
    record = record or Readout()
    rows = record.indices(stats.N)

    st = eb_init(stats, a, excluded=excluded)
    trace: Trace[PushState] = Trace(nodes=tuple(int(r) + 1 for r in rows))
    trace.record(0, rows, st.b_hat, st.lambda_hat)
    for W in weight_sequence(sched, T):
        st = eb_step(st, W, stats, a, steps.gamma(st.t + 1), steps.max_rel_step)
        if record.wants(st.t, T):
            trace.record(st.t, rows, st.b_hat, st.lambda_hat)
    trace.final = st
    logger.debug("EB run finished after %d rounds, residual %s", T, consensus_residual(st.b_hat))
    return trace
