"""Implementation of the 'montecarlo' command."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.panel import Panel
from rich.table import Table

from poissonnet.cli.commands.common import CommonOptions, fail, prepare, trial_progress
from poissonnet.exceptions import PoissonNetError
from poissonnet.experiments.artifacts import write_csv, write_manifest
from poissonnet.experiments.montecarlo import (
    MONTECARLO_HEADER,
    NETWORK_NODE,
    STEADY,
    MonteCarloResult,
    run_montecarlo,
)

if TYPE_CHECKING:
    from rich.console import Console


def run_montecarlo_command(
    opts: CommonOptions,
    console: Console,
    err_console: Console,
) -> None:
    """Run the montecarlo command.

    Args:
        opts: Shared experiment flags
        console: Console for standard output
        err_console: Console for error output
    """
    cfg, settings = prepare(opts, err_console)
    out_dir = cfg.output.out_dir

    try:
        with trial_progress(console, cfg.M, "Monte Carlo trials", opts.quiet) as advance:
            result = run_montecarlo(cfg, settings.workers, settings.chunk_size, advance)
        path = write_csv(out_dir / "montecarlo.csv", MONTECARLO_HEADER, result.rows())
        write_manifest(out_dir, "montecarlo", cfg, [path], {"trials": result.trials})
    except PoissonNetError as e:
        raise fail(err_console, e) from e

    _display(console, result)
    if not opts.quiet:
        console.print(f"[dim]Wrote {path}[/]")


def _display(console: Console, result: MonteCarloResult) -> None:
    cfg = result.config
    console.print(
        Panel(
            f"[bold]Nodes:[/] {cfg.N}\n"
            f"[bold]Trials:[/] {result.trials}\n"
            f"[bold]Rounds:[/] {cfg.T}\n"
            f"[bold]Schedule:[/] {cfg.schedule.kind}"
            f"{' (frozen)' if cfg.schedule.is_random and cfg.schedule.freeze else ''}\n"
            f"[bold]Seed:[/] {cfg.seed}",
            title="Monte Carlo",
            border_style="blue",
        )
    )

    table = Table(title="Last recorded round", show_header=True, header_style="bold")
    table.add_column("Series", style="cyan")
    table.add_column("t", justify="right")
    table.add_column("Nodes", justify="right")
    table.add_column("Mean RMSE", justify="right")
    table.add_column("Max RMSE", justify="right")
    for name, series in result.series.items():
        rmse = series.stats.rmse[-1]
        t = series.times[-1]
        nodes = "network" if series.nodes == (NETWORK_NODE,) else str(len(series.nodes))
        table.add_row(
            name,
            "steady" if t == STEADY else str(t),
            nodes,
            f"{float(rmse.mean()):.4g}",
            f"{float(rmse.max()):.4g}",
        )
    console.print(table)
