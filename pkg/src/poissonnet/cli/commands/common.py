"""Shared plumbing of the command implementations.

Every command resolves its configuration the same way: JSON file, then
``POISSONNET_*`` environment settings, then command-line flags.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from pydantic import ValidationError
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from poissonnet.config import PAPER_SCALE_TRIALS, ExperimentConfig, RuntimeSettings, resolve_config
from poissonnet.exceptions import ConfigValidationError, PoissonNetError
from poissonnet.log import configure_logging

if TYPE_CHECKING:
    from rich.console import Console


@dataclass(frozen=True, slots=True)
class CommonOptions:
    """Flags shared by the experiment commands."""

    config: Path | None = None
    seed: int | None = None
    trials: int | None = None
    rounds: int | None = None
    out_dir: Path | None = None
    workers: int | None = None
    paper_scale: bool = False
    freeze_graph: bool | None = None
    log_level: str | None = None
    quiet: bool = False

    def overrides(self) -> dict[str, Any]:
        trials = self.trials
        if trials is None and self.paper_scale:
            trials = PAPER_SCALE_TRIALS
        return {
            "seed": self.seed,
            "M": trials,
            "T": self.rounds,
            "output.out_dir": self.out_dir,
            "schedule.freeze": self.freeze_graph,
        }


def _runtime_settings(opts: CommonOptions) -> RuntimeSettings:
    try:
        settings = RuntimeSettings()
    except ValidationError as e:
        raise ConfigValidationError(f"Invalid POISSONNET_* environment: {e}") from e
    updates: dict[str, Any] = {}
    if opts.workers is not None:
        updates["workers"] = opts.workers
    if opts.log_level is not None:
        updates["log_level"] = opts.log_level
    level = str(updates.get("log_level", settings.log_level)).upper()
    if level not in logging.getLevelNamesMapping():
        raise ConfigValidationError(f"Unknown log level: {level}")
    return settings.model_copy(update=updates) if updates else settings


def prepare(
    opts: CommonOptions, err_console: Console, extra: dict[str, Any] | None = None
) -> tuple[ExperimentConfig, RuntimeSettings]:
    """Configure logging and resolve the experiment configuration.

    Exits with status 1 after printing the error when the configuration
    cannot be loaded.
    """
    try:
        settings = _runtime_settings(opts)
        configure_logging(settings.log_level, err_console)
        overrides = opts.overrides()
        overrides.update(extra or {})
        cfg = resolve_config(opts.config, overrides, settings)
    except PoissonNetError as e:
        err_console.print(f"[red]Error loading config:[/] {e}")
        raise SystemExit(1) from e
    return cfg, settings


def fail(err_console: Console, error: PoissonNetError) -> SystemExit:
    """Print an error and build the exit to raise."""
    err_console.print(f"[red]Error:[/] {error}")
    return SystemExit(1)


@contextmanager
def trial_progress(
    console: Console, total: int, description: str, quiet: bool
) -> Iterator[Callable[[int], None] | None]:
    """Progress bar over Monte Carlo trials; yields the advance callback."""
    if quiet:
        yield None
        return
    with Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(description, total=total)
        yield lambda done: progress.advance(task, done)
