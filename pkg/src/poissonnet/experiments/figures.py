"""Figure pipelines: Monte Carlo statistics next to the closed-form theory.

- fig3: RMSE of b_hom_i(t) on the fixed unbalanced cycle
- fig4: the same on a frozen Erdos-Renyi schedule
- fig5: RMSE of b_hom and b_ML against N, with the CRB
- fig6: normalised RMSE of the rate estimators at a one-sample node against N,
  from finite-horizon ad-hoc and EB runs next to their consensus limits,
  with that node kept out of the pooled hyperparameter estimates
- lambda-transient: RMSE of lambda_adhoc_i(t) on the fixed graph for N = 20, 50

Transient figures also evaluate the ergodicity bound on the variance gap at
every round and every node; violations are counted in the result.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from poissonnet.config.loader import merge_overrides
from poissonnet.config.models import ExperimentConfig
from poissonnet.exceptions import UnknownFigureError
from poissonnet.experiments.montecarlo import (
    DEFAULT_CHUNK_SIZE,
    NETWORK_NODE,
    STEADY,
    run_montecarlo,
    trial_schedule,
)
from poissonnet.graph.schedule import weight_sequence
from poissonnet.graph.tracker import TransitionTracker, tracker_init, tracker_step
from poissonnet.theory.bounds import crb, var_bhom, var_bhom_bound, var_bhom_transient
from poissonnet.theory.moments import (
    TheoryInputs,
    adhoc_transient_moments,
    eb_asymptotic_moments,
)

logger = logging.getLogger(__name__)

FIGURES = ("fig3", "fig4", "fig5", "fig6", "lambda-transient")
LAMBDA_TRANSIENT_SIZES = (20, 50)

# Absolute slack when comparing the variance gap with its bound.
BOUND_ATOL = 1e-12


@dataclass(frozen=True, slots=True)
class FigureResult:
    """Tabular figure data.

    Attributes:
        which: Figure id
        header: Column names
        rows: One list per CSV row
        bound_violations: Rounds x nodes where the ergodicity bound failed
        trials: Monte Carlo trials per point
    """

    which: str
    header: tuple[str, ...]
    rows: list[list[Any]] = field(default_factory=list)
    bound_violations: int = 0
    trials: int = 0

    def column(self, name: str) -> list[Any]:
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]

    def where(self, **match: Any) -> list[dict[str, Any]]:
        """Rows as dicts, filtered by exact column values."""
        out = []
        for row in self.rows:
            record = dict(zip(self.header, row, strict=True))
            if all(record[k] == v for k, v in match.items()):
                out.append(record)
        return out


ProgressFn = Callable[[int], None]


# =============================================================================
# Transient figures
# =============================================================================


def _tracker_trajectory(cfg: ExperimentConfig, T: int) -> list[TransitionTracker]:
    """Trackers at t = 0..T on the frozen schedule of cfg."""
    tr = tracker_init(cfg.N)
    history = [tr]
    for W in weight_sequence(trial_schedule(cfg), T):
        tr = tracker_step(tr, W)
        history.append(tr)
    return history


def _count_bound_violations(cfg: ExperimentConfig, history: list[TransitionTracker]) -> int:
    hp, sizes = cfg.hp, cfg.sample_sizes
    steady = var_bhom(hp, sizes)
    n_max = max(sizes)
    violations = 0
    for tr in history:
        gap = np.abs(np.asarray(var_bhom_transient(hp, sizes, tr.phi)) - steady)
        bound = var_bhom_bound(hp, n_max, tr.mu_hat, min(tr.delta, 1.0))
        bad = int(np.count_nonzero(gap > bound + BOUND_ATOL))
        if bad:
            logger.warning("Ergodicity bound violated at t=%d for %d node(s)", tr.t, bad)
        violations += bad
    return violations


def _transient_b(
    cfg: ExperimentConfig,
    which: str,
    kind: str,
    workers: int,
    chunk_size: int,
    on_progress: ProgressFn | None,
) -> FigureResult:
    if kind == "erdos_renyi" and not cfg.schedule.freeze:
        logger.warning("%s overlays theory on one realisation; freezing the graph", which)
    cfg = merge_overrides(
        cfg,
        {
            "schedule.kind": kind,
            "schedule.freeze": True,
            "estimators": ["adhoc"],
            "excluded_node": None,
        },
        skip_none=False,
    )
    result = run_montecarlo(cfg, workers, chunk_size, on_progress)
    series = result["adhoc.b"]
    history = _tracker_trajectory(cfg, cfg.T)
    violations = _count_bound_violations(cfg, history)

    hp, sizes = cfg.hp, cfg.sample_sizes
    steady = var_bhom(hp, sizes)
    n_max = max(sizes)
    st = series.stats
    header = (
        "t",
        "node",
        "n_i",
        "mean_mc",
        "std_error_mc",
        "rmse_mc",
        "rmse_theory",
        "rmse_consensus",
        "delta",
        "mu_hat",
        "var_gap",
        "var_gap_bound",
    )
    rows: list[list[Any]] = []
    for ti, t in enumerate(series.times):
        tr = history[t]
        for ni, node in enumerate(series.nodes):
            v_t = float(var_bhom_transient(hp, sizes, tr.row(node)))
            rows.append([
                t,
                node,
                sizes[node - 1],
                float(st.mean[ti, ni]),
                float(st.std_error[ti, ni]),
                float(st.rmse[ti, ni]),
                math.sqrt(v_t),
                math.sqrt(steady),
                tr.delta,
                tr.mu_hat,
                abs(v_t - steady),
                float(var_bhom_bound(hp, n_max, tr.mu_hat, min(tr.delta, 1.0))),
            ])
    return FigureResult(which, header, rows, violations, st.count)


def _lambda_transient(
    cfg: ExperimentConfig, workers: int, chunk_size: int, on_progress: ProgressFn | None
) -> FigureResult:
    header = (
        "N",
        "t",
        "node",
        "n_i",
        "lambda",
        "rmse_mc",
        "rmse_theory",
        "rmse_steady",
    )
    rows: list[list[Any]] = []
    violations = 0
    trials = 0
    lam = cfg.sweep.target_lambda or (cfg.prior.a - 1.0) * cfg.prior.b
    for N in LAMBDA_TRANSIENT_SIZES:
        base = merge_overrides(
            cfg,
            {
                "N": N,
                "readout.nodes": None,
                "target_node": None,
                "excluded_node": None,
                "pinned_rates": {},
            },
            skip_none=False,
        )
        nodes = base.readout.tracked_nodes(N)
        cfg_n = merge_overrides(
            base,
            {
                "schedule.kind": "unbalanced_cycle",
                "schedule.freeze": True,
                "estimators": ["adhoc"],
                "readout.nodes": list(nodes),
                "pinned_rates": {node: lam for node in nodes},
            },
        )
        result = run_montecarlo(cfg_n, workers, chunk_size, on_progress)
        series = result["adhoc.lambda"]
        history = _tracker_trajectory(cfg_n, cfg_n.T)
        violations += _count_bound_violations(cfg_n, history)
        hp, sizes = cfg_n.hp, cfg_n.sample_sizes
        steady = var_bhom(hp, sizes)
        for ni, node in enumerate(series.nodes):
            inputs = TheoryInputs(hp, tuple(sizes), node, lam)
            rmse_steady = adhoc_transient_moments(inputs, steady).rmse(lam)
            for ti, t in enumerate(series.times):
                v_t = float(var_bhom_transient(hp, sizes, history[t].row(node)))
                rows.append([
                    N,
                    t,
                    node,
                    sizes[node - 1],
                    lam,
                    float(series.stats.rmse[ti, ni]),
                    adhoc_transient_moments(inputs, v_t).rmse(lam),
                    rmse_steady,
                ])
        trials = series.stats.count
    return FigureResult("lambda-transient", header, rows, violations, trials)


# =============================================================================
# Sweeps over N
# =============================================================================


def _fig5(
    cfg: ExperimentConfig, workers: int, chunk_size: int, on_progress: ProgressFn | None
) -> FigureResult:
    header = (
        "N",
        "mean_mc_bhom",
        "rmse_mc_bhom",
        "mean_mc_ml",
        "rmse_mc_ml",
        "rmse_theory_bhom",
        "crb",
    )
    rows: list[list[Any]] = []
    trials = 0
    for N in cfg.sweep.N_values:
        cfg_n = merge_overrides(
            cfg,
            {
                "N": N,
                "estimators": ["bhom", "centralized_ml"],
                "readout.nodes": [1],
                "target_node": None,
                "excluded_node": None,
                "pinned_rates": {},
            },
            skip_none=False,
        )
        result = run_montecarlo(cfg_n, workers, chunk_size, on_progress)
        idx = result["bhom.b"].at(STEADY, NETWORK_NODE)
        bhom = result["bhom.b"].stats
        ml = result["centralized_ml.b"].stats
        hp, sizes = cfg_n.hp, cfg_n.sample_sizes
        rows.append([
            N,
            float(bhom.mean[idx]),
            float(bhom.rmse[idx]),
            float(ml.mean[idx]),
            float(ml.rmse[idx]),
            math.sqrt(var_bhom(hp, sizes)),
            math.sqrt(crb(hp, sizes)),
        ])
        trials = bhom.count
    return FigureResult("fig5", header, rows, 0, trials)


def _fig6(
    cfg: ExperimentConfig, workers: int, chunk_size: int, on_progress: ProgressFn | None
) -> FigureResult:
    """Target node N pinned at lambda_j and kept out of every pooled estimate.

    The ad-hoc and EB columns come from distributed runs of ``sweep.rounds``
    rounds on ``sweep.schedule``; the ``*_limit`` columns are the consensus
    values those runs approach (b_hom and the ML oracle).
    """
    header = (
        "N",
        "lambda_j",
        "rmse_dec",
        "rmse_adhoc",
        "rmse_eb",
        "std_error_adhoc",
        "std_error_eb",
        "rmse_adhoc_limit",
        "rmse_eb_limit",
        "theory_adhoc",
        "asymptote",
    )
    rows: list[list[Any]] = []
    trials = 0
    lam = cfg.sweep.target_lambda or (cfg.prior.a - 1.0) * cfg.prior.b
    T = cfg.sweep.rounds
    for N in cfg.sweep.N_values:
        cfg_n = merge_overrides(
            cfg,
            {
                "N": N,
                "T": T,
                "schedule": cfg.sweep.schedule.model_dump(),
                "estimators": ["dec", "bhom", "centralized_ml", "adhoc", "eb"],
                "readout.nodes": [N],
                "readout.final_only": True,
                "target_node": N,
                "excluded_node": N,
                "pinned_rates": {N: lam},
            },
            skip_none=False,
        )
        result = run_montecarlo(cfg_n, workers, chunk_size, on_progress)
        hp, sizes = cfg_n.hp, cfg_n.sample_sizes
        inputs = TheoryInputs(hp, tuple(sizes), N, lam)
        norm = math.sqrt(lam / inputs.n_j)
        steady = result["dec.lambda"].at(STEADY, N)
        last = result["adhoc.lambda"].at(T, N)
        dec = result["dec.lambda"].stats
        adhoc = result["adhoc.lambda"].stats
        eb = result["eb.lambda"].stats
        adhoc_limit = result["bhom.lambda"].stats
        eb_limit = result["centralized_ml.lambda"].stats
        theory = adhoc_transient_moments(inputs, var_bhom(hp, sizes[:-1])).rmse(lam)
        rows.append([
            N,
            lam,
            float(dec.rmse[steady]) / norm,
            float(adhoc.rmse[last]) / norm,
            float(eb.rmse[last]) / norm,
            _rmse_std_error(adhoc.mse[last], adhoc.count) / norm,
            _rmse_std_error(eb.mse[last], eb.count) / norm,
            float(adhoc_limit.rmse[steady]) / norm,
            float(eb_limit.rmse[steady]) / norm,
            theory / norm,
            eb_asymptotic_moments(inputs).rmse(lam) / norm,
        ])
        trials = adhoc.count
    return FigureResult("fig6", header, rows, 0, trials)


def _rmse_std_error(mse: float, count: int) -> float:
    """Delta-method standard error of a sample RMSE for roughly Gaussian errors."""
    if count < 2 or mse <= 0:
        return 0.0
    return float(math.sqrt(mse) / math.sqrt(2.0 * count))


# =============================================================================
# Dispatch
# =============================================================================


def figure(
    cfg: ExperimentConfig,
    which: str,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    on_progress: ProgressFn | None = None,
) -> FigureResult:
    """Compute the data behind one figure.

    Raises:
        UnknownFigureError: If ``which`` is not a known figure id
    """
    logger.info("Computing %s with M=%d, T=%d", which, cfg.M, cfg.T)
    if which == "fig3":
        return _transient_b(cfg, which, "unbalanced_cycle", workers, chunk_size, on_progress)
    if which == "fig4":
        return _transient_b(cfg, which, "erdos_renyi", workers, chunk_size, on_progress)
    if which == "fig5":
        return _fig5(cfg, workers, chunk_size, on_progress)
    if which == "fig6":
        return _fig6(cfg, workers, chunk_size, on_progress)
    if which == "lambda-transient":
        return _lambda_transient(cfg, workers, chunk_size, on_progress)
    raise UnknownFigureError(which, FIGURES)


def figure_trials(cfg: ExperimentConfig, which: str) -> int:
    """Total Monte Carlo trials a figure runs (for progress bars)."""
    if which in ("fig5", "fig6"):
        return cfg.M * len(cfg.sweep.N_values)
    if which == "lambda-transient":
        return cfg.M * len(LAMBDA_TRANSIENT_SIZES)
    return cfg.M
