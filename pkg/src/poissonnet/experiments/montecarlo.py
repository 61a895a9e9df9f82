"""Monte Carlo harness over seeded trials.

Trials are grouped into fixed-size chunks that depend only on the
configuration, never on the number of workers. Each chunk is simulated
independently (in-process or in a worker pool) and the per-chunk
statistics are merged in chunk order, so serial and parallel runs yield
identical results. Changing the chunk size changes the merge order
and so the last bits of the statistics; byte-identical output needs the
same chunk size.

Every trial m draws its network from the stream (seed, TRIAL_STREAM, m).
A random schedule is drawn once from (seed, GRAPH_STREAM) when frozen, or
per trial from (seed, GRAPH_STREAM, m) otherwise.

Recorded series are keyed ``<estimator>.<quantity>``:

- ``dec.lambda``: local sample means sigma_i / n_i
- ``bhom.b`` / ``bhom.lambda``: the ad-hoc consensus value sigma / (a n)
  and its shrinkage readouts
- ``centralized_ml.b`` / ``centralized_ml.lambda``: the ML oracle and the
  Empirical Bayes readouts it induces
- ``adhoc.b`` / ``adhoc.lambda``: ad-hoc push-sum estimates per round
- ``eb.b`` / ``eb.lambda``: subgradient-push estimates per round

Network-level quantities use node 0; steady-state series use t = STEADY.
With an excluded node the centralized hyperparameter estimates pool the
other nodes only, while every node still reads out its own rate.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from poissonnet.config.models import ExperimentConfig
from poissonnet.core.model import (
    B_MIN,
    FloatArray,
    NetworkData,
    SufficientStats,
    homogeneous_estimate,
    sample_network,
    shrinkage,
    without_node,
)
from poissonnet.core.seeding import derive_seed, seed_sequence
from poissonnet.core.solver import centralized_ml_batch
from poissonnet.estimators.adhoc import adhoc_run
from poissonnet.estimators.eb import eb_run
from poissonnet.estimators.readout import Trace
from poissonnet.experiments.stats import SampleStats
from poissonnet.graph.schedule import GraphSchedule

logger = logging.getLogger(__name__)

TRIAL_STREAM = 1
GRAPH_STREAM = 2

STEADY = -1
NETWORK_NODE = 0

DEFAULT_CHUNK_SIZE = 250


@dataclass(frozen=True, slots=True)
class Series:
    """Statistics of one recorded quantity.

    ``stats`` has shape (len(times), len(nodes)).
    """

    name: str
    times: tuple[int, ...]
    nodes: tuple[int, ...]
    stats: SampleStats

    def merge(self, other: Series) -> Series:
        return Series(self.name, self.times, self.nodes, self.stats.merge(other.stats))

    def at(self, t: int, node: int) -> tuple[int, int]:
        """Index of (t, node) in the statistics arrays."""
        return self.times.index(t), self.nodes.index(node)


@dataclass(frozen=True, slots=True)
class MonteCarloResult:
    """Merged statistics of a Monte Carlo run."""

    config: ExperimentConfig
    series: dict[str, Series]

    @property
    def trials(self) -> int:
        return next(iter(self.series.values())).stats.count if self.series else 0

    def __getitem__(self, name: str) -> Series:
        return self.series[name]

    def rows(self) -> Iterator[list[object]]:
        """Long-format rows: series, t, node, count, mean, variance, std_error, rmse."""
        for name, s in self.series.items():
            st = s.stats
            for ti, t in enumerate(s.times):
                for ni, node in enumerate(s.nodes):
                    yield [
                        name,
                        "steady" if t == STEADY else t,
                        node,
                        st.count,
                        float(st.mean[ti, ni]),
                        float(st.variance[ti, ni]),
                        float(st.std_error[ti, ni]),
                        float(st.rmse[ti, ni]),
                    ]


MONTECARLO_HEADER = ["series", "t", "node", "count", "mean", "variance", "std_error", "rmse"]


# =============================================================================
# Seeding and sampling
# =============================================================================


def trial_network(cfg: ExperimentConfig, m: int) -> NetworkData:
    """Network data of trial m."""
    return sample_network(
        cfg.hp,
        cfg.sample_sizes,
        seed_sequence(cfg.seed, TRIAL_STREAM, m),
        pinned_rates=cfg.pinned_rates or None,
    )


def trial_schedule(cfg: ExperimentConfig, m: int | None = None) -> GraphSchedule:
    """Schedule of trial m; the frozen schedule when m is None or the graph is frozen."""
    if m is None or cfg.schedule.freeze or not cfg.schedule.is_random:
        return cfg.schedule.build(cfg.N, derive_seed(cfg.seed, GRAPH_STREAM))
    return cfg.schedule.build(cfg.N, derive_seed(cfg.seed, GRAPH_STREAM, m))


def chunk_bounds(M: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(start, min(start + chunk_size, M)) for start in range(0, M, chunk_size)]


# =============================================================================
# Chunk simulation
# =============================================================================


@dataclass(frozen=True, slots=True)
class ChunkJob:
    """Work unit: trials [start, stop) of a configuration."""

    cfg: ExperimentConfig
    start: int
    stop: int


def _series(
    name: str,
    times: tuple[int, ...],
    nodes: tuple[int, ...],
    values: FloatArray,
    truth: FloatArray | float,
) -> Series:
    return Series(name, times, nodes, SampleStats.from_batch(values, truth))


def _stack_traces(traces: list[Trace[Any]]) -> tuple[FloatArray, FloatArray]:
    b = np.stack([tr.b_hat_array() for tr in traces], axis=-1)
    lam = np.stack([tr.lambda_hat_array() for tr in traces], axis=-1)
    return b, lam


def _distributed_traces(
    cfg: ExperimentConfig,
    job: ChunkJob,
    stats: SufficientStats,
    nets: list[NetworkData],
    which: str,
) -> tuple[tuple[int, ...], tuple[int, ...], FloatArray, FloatArray]:
    a = cfg.prior.a
    readout = cfg.readout.to_readout(cfg.N)

    def run(data: NetworkData | SufficientStats, sched: GraphSchedule) -> Trace[Any]:
        if which == "adhoc":
            return adhoc_run(data, sched, a, cfg.T, readout, cfg.excluded_node)
        # subgradient-push needs at least one round
        steps = cfg.steps.to_schedule()
        return eb_run(data, sched, a, steps, max(cfg.T, 1), readout, cfg.excluded_node)

    if cfg.schedule.is_random and not cfg.schedule.freeze:
        trials = zip(range(job.start, job.stop), nets, strict=True)
        traces = [run(net, trial_schedule(cfg, m)) for m, net in trials]
        b, lam = _stack_traces(traces)
        return tuple(traces[0].times), traces[0].nodes, b, lam

    trace = run(stats, trial_schedule(cfg))
    return tuple(trace.times), trace.nodes, trace.b_hat_array(), trace.lambda_hat_array()


def simulate_chunk(job: ChunkJob) -> dict[str, Series]:
    """Simulate one chunk of trials and reduce it to statistics.

    Must be at module level so ProcessPoolExecutor can pickle it.
    """
    cfg = job.cfg
    a, b_true = cfg.prior.a, cfg.prior.b
    nets = [trial_network(cfg, m) for m in range(job.start, job.stop)]
    stats = SufficientStats.stack(nets)
    rates = np.stack([net.rates for net in nets], axis=1)
    n = stats.n_column
    rows = cfg.readout.to_readout(cfg.N).indices(cfg.N)
    nodes = tuple(int(r) + 1 for r in rows)
    steady = (STEADY,)
    network = (NETWORK_NODE,)
    pooled = without_node(stats, cfg.excluded_node)

    out: dict[str, Series] = {}
    if "dec" in cfg.estimators:
        dec = stats.sigma / n
        out["dec.lambda"] = _series("dec.lambda", steady, nodes, dec[rows][None], rates[rows][None])
    if "bhom" in cfg.estimators:
        b_hom = np.asarray(homogeneous_estimate(pooled, a))
        lam = np.asarray(shrinkage(np.maximum(b_hom, B_MIN), n, stats.sigma, a))
        out["bhom.b"] = _series("bhom.b", steady, network, b_hom[None, None], b_true)
        out["bhom.lambda"] = _series(
            "bhom.lambda", steady, nodes, lam[rows][None], rates[rows][None]
        )
    if "centralized_ml" in cfg.estimators:
        b_ml = centralized_ml_batch(pooled, a)
        lam = np.asarray(shrinkage(b_ml, n, stats.sigma, a))
        out["centralized_ml.b"] = _series(
            "centralized_ml.b", steady, network, b_ml[None, None], b_true
        )
        out["centralized_ml.lambda"] = _series(
            "centralized_ml.lambda", steady, nodes, lam[rows][None], rates[rows][None]
        )
    for which in ("adhoc", "eb"):
        if which in cfg.estimators:
            times, traced, b_vals, lam_vals = _distributed_traces(cfg, job, stats, nets, which)
            truth = rates[np.asarray(traced) - 1][None]
            out[f"{which}.b"] = _series(f"{which}.b", times, traced, b_vals, b_true)
            out[f"{which}.lambda"] = _series(f"{which}.lambda", times, traced, lam_vals, truth)
    return out


# =============================================================================
# Driver
# =============================================================================


def run_montecarlo(
    cfg: ExperimentConfig,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    on_progress: Callable[[int], None] | None = None,
) -> MonteCarloResult:
    """Run cfg.M seeded trials and merge their statistics in trial order.

    Args:
        cfg: Experiment configuration
        workers: Worker processes; 1 runs in-process
        chunk_size: Trials per work unit
        on_progress: Called with the number of trials finished after each chunk

    Returns:
        MonteCarloResult with one Series per recorded quantity
    """
    jobs = [ChunkJob(cfg, start, stop) for start, stop in chunk_bounds(cfg.M, chunk_size)]
    logger.info(
        "Running %d trials in %d chunks on %d worker(s)", cfg.M, len(jobs), workers
    )

    merged: dict[str, Series] = {}

    def absorb(job: ChunkJob, part: dict[str, Series]) -> None:
        for name, series in part.items():
            merged[name] = merged[name].merge(series) if name in merged else series
        if on_progress is not None:
            on_progress(job.stop - job.start)

    if workers <= 1 or len(jobs) == 1:
        for job in jobs:
            absorb(job, simulate_chunk(job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for job, part in zip(jobs, executor.map(simulate_chunk, jobs), strict=True):
                absorb(job, part)

    logger.info("Monte Carlo run finished: %d series", len(merged))
    return MonteCarloResult(config=cfg, series=merged)
