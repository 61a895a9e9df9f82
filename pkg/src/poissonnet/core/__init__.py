"""Gamma-Poisson model, closed forms, and the centralized ML oracle."""

from __future__ import annotations

from poissonnet.core.model import (
    B_MIN,
    HyperParams,
    MonitorData,
    NetworkData,
    SufficientStats,
    as_stats,
    decentralized_estimate,
    homogeneous_estimate,
    local_estimate,
    log_marginal,
    ml_cost,
    ml_gradient,
    mmse_estimate,
    network_cost,
    network_gradient,
    posterior_params,
    sample_network,
    shrinkage,
    shrinkage_weight,
)
from poissonnet.core.solver import MLSolution, centralized_ml, centralized_ml_batch, solve_ml

__all__ = [
    "B_MIN",
    "HyperParams",
    "MLSolution",
    "MonitorData",
    "NetworkData",
    "SufficientStats",
    "as_stats",
    "centralized_ml",
    "centralized_ml_batch",
    "decentralized_estimate",
    "homogeneous_estimate",
    "local_estimate",
    "log_marginal",
    "ml_cost",
    "ml_gradient",
    "mmse_estimate",
    "network_cost",
    "network_gradient",
    "posterior_params",
    "sample_network",
    "shrinkage",
    "shrinkage_weight",
    "solve_ml",
]
