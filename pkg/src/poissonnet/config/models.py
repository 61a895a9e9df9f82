"""Pydantic models for experiment configuration.

Configuration is read from a JSON file mirroring ``ExperimentConfig``.
Every field has a default, so an empty file (or no file at all) gives the
desk-scale version of the fixed-graph study: a = 10, b = 1, N = 20, half
the nodes with 50 measurements and half with one.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from poissonnet.core.model import HyperParams
from poissonnet.estimators.eb import StepSchedule
from poissonnet.estimators.readout import Readout
from poissonnet.graph.schedule import GraphSchedule, load_scripted_schedule

EstimatorName = Literal["dec", "adhoc", "eb", "centralized_ml", "bhom"]

PAPER_SCALE_TRIALS = 50_000


class PriorConfig(BaseModel):
    """Gamma prior on the arrival rates."""

    a: float = Field(default=10.0, gt=0, description="Prior shape, known to every node")
    b: float = Field(default=1.0, gt=0, description="Prior scale (ground truth of the estimation)")

    model_config = {"extra": "forbid"}

    def to_hyperparams(self) -> HyperParams:
        return HyperParams(a=self.a, b=self.b)


class SizePolicyConfig(BaseModel):
    """How many measurements each node holds."""

    kind: Literal["half_max_half_one", "explicit", "homogeneous"] = Field(
        default="half_max_half_one",
        description=(
            "'half_max_half_one': first half of the nodes hold n_max, the rest one; "
            "'explicit': use 'sizes'; 'homogeneous': every node holds n_per_node"
        ),
    )
    n_max: int = Field(default=50, ge=1, description="Largest sample size n_max")
    sizes: list[int] | None = Field(
        default=None,
        description="Explicit per-node sample sizes (kind='explicit')",
    )
    n_per_node: int = Field(default=5, ge=1, description="Sample size for kind='homogeneous'")

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check_explicit(self) -> SizePolicyConfig:
        if self.kind == "explicit":
            if not self.sizes:
                raise ValueError("kind='explicit' requires a non-empty 'sizes' list")
            if min(self.sizes) < 1:
                raise ValueError("sample sizes must be >= 1")
        return self

    def sizes_for(self, N: int) -> list[int]:
        """Sample sizes of an N-node network.

        Raises:
            ValueError: If an explicit list does not have N entries
        """
        if self.kind == "homogeneous":
            return [self.n_per_node] * N
        if self.kind == "explicit":
            assert self.sizes is not None
            if len(self.sizes) != N:
                raise ValueError(f"explicit sizes list has {len(self.sizes)} entries, N={N}")
            return list(self.sizes)
        half = (N + 1) // 2
        return [self.n_max] * half + [1] * (N - half)

    def largest(self, N: int) -> int:
        return max(self.sizes_for(N))


class ScheduleConfig(BaseModel):
    """Communication schedule."""

    kind: Literal["unbalanced_cycle", "cycle", "complete", "erdos_renyi", "scripted"] = Field(
        default="unbalanced_cycle",
        description="Schedule family; 'unbalanced_cycle' is the cycle plus 3>1, 3>2, 4>1, 4>2",
    )
    p: float = Field(default=0.01, ge=0, le=1, description="Edge probability (erdos_renyi)")
    seed: int | None = Field(
        default=None,
        ge=0,
        description="Seed of the random graph; derived from the experiment seed when unset",
    )
    path: Path | None = Field(default=None, description="Schedule file (scripted)")
    freeze: bool = Field(
        default=False,
        description="Reuse one random-graph realisation for every trial instead of redrawing",
    )

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check_scripted(self) -> ScheduleConfig:
        if self.kind == "scripted" and self.path is None:
            raise ValueError("kind='scripted' requires 'path'")
        return self

    def build(self, N: int, seed: int) -> GraphSchedule:
        """Materialise the schedule for N nodes; ``seed`` is used when no seed is pinned."""
        if self.kind == "unbalanced_cycle":
            return GraphSchedule.unbalanced_cycle(N)
        if self.kind == "cycle":
            return GraphSchedule.cycle(N)
        if self.kind == "complete":
            return GraphSchedule.complete(N)
        if self.kind == "erdos_renyi":
            er_seed = self.seed if self.seed is not None else seed
            return GraphSchedule.erdos_renyi(N, self.p, er_seed)
        assert self.path is not None
        return load_scripted_schedule(self.path, N)

    @property
    def is_random(self) -> bool:
        return self.kind == "erdos_renyi"


class StepConfig(BaseModel):
    """Step sizes of the subgradient-push estimator."""

    gamma0: float = Field(default=1.0, gt=0, description="Initial step size")
    exponent: float = Field(default=1.0, gt=0.5, le=1.0, description="Decay exponent")
    max_rel_step: float | None = Field(
        default=0.5,
        gt=0,
        lt=1,
        description="Bound on each gradient step as a fraction of the local mass (null disables)",
    )

    model_config = {"extra": "forbid"}

    def to_schedule(self) -> StepSchedule:
        return StepSchedule(
            gamma0=self.gamma0, exponent=self.exponent, max_rel_step=self.max_rel_step
        )


class ReadoutConfig(BaseModel):
    """Which nodes and rounds are recorded."""

    nodes: list[int] | None = Field(
        default=None,
        description="1-based nodes to record; default: two n_max nodes and two one-sample nodes",
    )
    stride: int = Field(default=1, ge=1, description="Record every stride-th round")
    final_only: bool = Field(default=False, description="Record only t=0 and the last round")

    model_config = {"extra": "forbid"}

    def tracked_nodes(self, N: int) -> tuple[int, ...]:
        if self.nodes is not None:
            return tuple(self.nodes)
        half = (N + 1) // 2
        candidates = [1, 2, half + 1, half + 2]
        return tuple(dict.fromkeys(min(max(c, 1), N) for c in candidates))

    def to_readout(self, N: int) -> Readout:
        return Readout(nodes=self.tracked_nodes(N), final_only=self.final_only, stride=self.stride)


class SweepConfig(BaseModel):
    """Network-size sweep of the steady-state studies."""

    N_values: list[int] = Field(
        default_factory=lambda: [2, 4, 8, 16, 32, 64],
        description="Network sizes of the sweep",
    )
    target_lambda: float | None = Field(
        default=None,
        gt=0,
        description="Pinned rate of the target node; default (a - 1) b, the prior mode",
    )
    rounds: int = Field(default=1000, ge=1, description="Rounds of the distributed runs in fig6")
    schedule: ScheduleConfig = Field(
        default_factory=lambda: ScheduleConfig(kind="complete"),
        description="Schedule of the distributed runs in fig6, built for each N",
    )

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check_sizes(self) -> SweepConfig:
        if not self.N_values or min(self.N_values) < 2:
            raise ValueError("N_values must be non-empty with every N >= 2")
        return self


class OutputConfig(BaseModel):
    """Artifact locations."""

    out_dir: Path = Field(default=Path("results"), description="Directory for CSVs and manifest")

    model_config = {"extra": "forbid"}


class ExperimentConfig(BaseModel):
    """Main configuration for simulations and Monte Carlo studies."""

    prior: PriorConfig = Field(default_factory=PriorConfig)
    N: int = Field(default=20, ge=1, description="Number of nodes")
    size_policy: SizePolicyConfig = Field(default_factory=SizePolicyConfig)
    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)
    M: int = Field(default=10_000, ge=1, description="Monte Carlo trials")
    T: int = Field(default=100, ge=0, description="Rounds per distributed run")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Root seed")
    estimators: list[EstimatorName] = Field(
        default_factory=lambda: ["bhom", "adhoc"],
        description="Estimators run by montecarlo/simulate",
    )
    steps: StepConfig = Field(default_factory=StepConfig)
    readout: ReadoutConfig = Field(default_factory=ReadoutConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    pinned_rates: dict[int, float] = Field(
        default_factory=dict,
        description="Node id -> fixed rate, overriding the prior draw",
    )
    excluded_node: int | None = Field(
        default=None,
        ge=1,
        description="Node whose counts are withheld from the hyperparameter estimate",
    )
    target_node: int | None = Field(
        default=None,
        ge=1,
        description="Node analysed by the theory report; default: the last node",
    )

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check_nodes(self) -> ExperimentConfig:
        for field_name, node in (
            ("excluded_node", self.excluded_node),
            ("target_node", self.target_node),
        ):
            if node is not None and node > self.N:
                raise ValueError(f"{field_name}={node} exceeds N={self.N}")
        for node, rate in self.pinned_rates.items():
            if not 1 <= node <= self.N:
                raise ValueError(f"pinned node {node} is outside [1, {self.N}]")
            if not rate > 0:
                raise ValueError(f"pinned rate for node {node} must be positive")
        if self.readout.nodes is not None and any(
            not 1 <= node <= self.N for node in self.readout.nodes
        ):
            raise ValueError(f"readout nodes must lie in [1, {self.N}]")
        if self.size_policy.kind == "explicit":
            self.size_policy.sizes_for(self.N)
        distributed = {"adhoc", "eb"} & set(self.estimators)
        if distributed and self.N < 2:
            raise ValueError("distributed estimators need N >= 2")
        return self

    @property
    def hp(self) -> HyperParams:
        return self.prior.to_hyperparams()

    @property
    def sample_sizes(self) -> list[int]:
        return self.size_policy.sizes_for(self.N)

    @property
    def target(self) -> int:
        return self.target_node if self.target_node is not None else self.N


class RuntimeSettings(BaseSettings):
    """Execution settings read from ``POISSONNET_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="POISSONNET_", extra="ignore")

    workers: int = Field(default=1, ge=1, description="Worker processes for Monte Carlo trials")
    # Output is byte-identical across worker counts only at a fixed chunk size:
    # the chunk boundaries set the order of the floating-point merges.
    chunk_size: int = Field(
        default=250,
        ge=1,
        description="Trials per work unit; changing it perturbs statistics in the last bits",
    )
    log_level: str = Field(default="WARNING", description="Log level of the poissonnet logger")
    out_dir: Path | None = Field(default=None, description="Overrides output.out_dir")
