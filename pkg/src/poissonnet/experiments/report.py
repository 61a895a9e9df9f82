"""Closed-form predictions for an experiment configuration."""

from __future__ import annotations

import logging

from poissonnet.config.models import ExperimentConfig
from poissonnet.experiments.montecarlo import trial_schedule
from poissonnet.graph.schedule import weight_sequence
from poissonnet.graph.tracker import tracker_init, tracker_step
from poissonnet.theory.moments import Participation, TheoryInputs, TheoryReport, theory_report

logger = logging.getLogger(__name__)


def theory_inputs(cfg: ExperimentConfig) -> TheoryInputs:
    """TheoryInputs for the target node of cfg.

    The conditioning rate is the pinned rate of the target if any, then
    ``sweep.target_lambda``, then the prior mode (a - 1) b. The target is
    analysed as excluded when it is cfg's excluded node.
    """
    target = cfg.target
    lam = cfg.pinned_rates.get(target)
    if lam is None:
        lam = cfg.sweep.target_lambda or (cfg.prior.a - 1.0) * cfg.prior.b
    participation = (
        Participation.EXCLUDED if cfg.excluded_node == target else Participation.INCLUDED
    )
    return TheoryInputs(cfg.hp, tuple(cfg.sample_sizes), target, lam, participation)


def theory_for_config(cfg: ExperimentConfig, transient: bool = True) -> TheoryReport:
    """Theory report for cfg, with transient predictions for t = 0..cfg.T.

    Transient rows come from the transition tracker run on the frozen
    schedule of cfg; ``transient=False`` or T = 0 skips them.
    """
    inputs = theory_inputs(cfg)
    if not transient or cfg.T == 0:
        return theory_report(inputs)
    tr = tracker_init(cfg.N)
    rows = [tr.row(inputs.target_node).copy()]
    for W in weight_sequence(trial_schedule(cfg), cfg.T):
        tr = tracker_step(tr, W)
        rows.append(tr.row(inputs.target_node).copy())
    logger.debug("delta(%d) = %.3e, mu_hat = %.3e", cfg.T, tr.delta, tr.mu_hat)
    return theory_report(inputs, rows, range(cfg.T + 1))
