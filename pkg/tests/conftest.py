"""Shared test fixtures for poissonnet."""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from poissonnet.config import ExperimentConfig
from poissonnet.core.model import HyperParams, MonitorData, NetworkData, sample_network
from poissonnet.graph.schedule import GraphSchedule

if TYPE_CHECKING:
    from pathlib import Path


# =============================================================================
# Model Fixtures
# =============================================================================


@pytest.fixture
def hp() -> HyperParams:
    """The prior used throughout the experiments: a=10, b=1."""
    return HyperParams(a=10.0, b=1.0)


@pytest.fixture
def small_network(hp: HyperParams) -> NetworkData:
    """Four nodes, two heavy and two single-sample."""
    return sample_network(hp, [50, 50, 1, 1], seed=7)


@pytest.fixture
def handmade_network() -> NetworkData:
    """A network with known counts: sigma = (12, 3, 0), n = (4, 1, 2)."""
    monitors = (
        MonitorData(node_id=1, counts=(2, 4, 3, 3)),
        MonitorData(node_id=2, counts=(3,)),
        MonitorData(node_id=3, counts=(0, 0)),
    )
    return NetworkData(monitors=monitors, lambdas=(3.0, 2.5, 0.5))


@pytest.fixture
def split_network(hp: HyperParams) -> NetworkData:
    """Twenty nodes with the default size split (ten hold 50 samples, ten hold one)."""
    return sample_network(hp, [50] * 10 + [1] * 10, seed=11)


# =============================================================================
# Schedule Fixtures
# =============================================================================


@pytest.fixture
def unbalanced_cycle() -> GraphSchedule:
    """The 20-node directed cycle with four extra edges into nodes 1 and 2."""
    return GraphSchedule.unbalanced_cycle(20)


@pytest.fixture
def alternating_schedule() -> GraphSchedule:
    """Three nodes whose cycle is split over two slots."""
    return GraphSchedule.scripted(3, [{(1, 2), (2, 3)}, {(3, 1)}])


# =============================================================================
# Config Fixtures
# =============================================================================


@pytest.fixture
def small_config(tmp_path: Path) -> ExperimentConfig:
    """A desk-sized configuration writing into a temporary directory."""
    return ExperimentConfig.model_validate(
        {
            "N": 6,
            "M": 40,
            "T": 25,
            "seed": 3,
            "size_policy": {"kind": "half_max_half_one", "n_max": 10},
            "sweep": {"N_values": [2, 4]},
            "output": {"out_dir": str(tmp_path / "results")},
        }
    )


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """A small JSON configuration file."""
    path = tmp_path / "experiment.json"
    path.write_text(
        """{
  "N": 6,
  "M": 30,
  "T": 20,
  "seed": 5,
  "size_policy": {"kind": "half_max_half_one", "n_max": 10},
  "sweep": {"N_values": [2, 4]}
}
""",
        encoding="utf-8",
    )
    return path
