"""Distributed estimators: ad-hoc push-sum and Empirical Bayes subgradient-push."""

from __future__ import annotations

from poissonnet.estimators.adhoc import AdHocState, adhoc_init, adhoc_limit, adhoc_run, adhoc_step
from poissonnet.estimators.eb import PushState, StepSchedule, eb_init, eb_run, eb_step
from poissonnet.estimators.readout import Readout, Trace, consensus_residual

__all__ = [
    "AdHocState",
    "PushState",
    "Readout",
    "StepSchedule",
    "Trace",
    "adhoc_init",
    "adhoc_limit",
    "adhoc_run",
    "adhoc_step",
    "consensus_residual",
    "eb_init",
    "eb_run",
    "eb_step",
]
