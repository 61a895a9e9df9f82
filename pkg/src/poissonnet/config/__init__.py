"""Configuration management for poissonnet."""

from __future__ import annotations

from poissonnet.config.loader import load_config, merge_overrides, resolve_config
from poissonnet.config.models import (
    PAPER_SCALE_TRIALS,
    ExperimentConfig,
    OutputConfig,
    PriorConfig,
    ReadoutConfig,
    RuntimeSettings,
    ScheduleConfig,
    SizePolicyConfig,
    StepConfig,
    SweepConfig,
)

__all__ = [
    "PAPER_SCALE_TRIALS",
    "ExperimentConfig",
    "OutputConfig",
    "PriorConfig",
    "ReadoutConfig",
    "RuntimeSettings",
    "ScheduleConfig",
    "SizePolicyConfig",
    "StepConfig",
    "SweepConfig",
    "load_config",
    "merge_overrides",
    "resolve_config",
]
