"""Implementation of the 'figure' command.

Computes the Monte Carlo and closed-form data behind one figure and writes
it as ``<figure>.csv``; plotting is left to external tools.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from rich.panel import Panel
from rich.table import Table

from poissonnet.cli.commands.common import CommonOptions, fail, prepare, trial_progress
from poissonnet.exceptions import PoissonNetError, UnknownFigureError
from poissonnet.experiments.artifacts import write_csv, write_manifest
from poissonnet.experiments.figures import FIGURES, FigureResult, figure, figure_trials

if TYPE_CHECKING:
    from rich.console import Console

PREVIEW_ROWS = 12


def run_figure(
    which: str,
    opts: CommonOptions,
    console: Console,
    err_console: Console,
) -> None:
    """Run the figure command.

    Args:
        which: Figure id (fig3, fig4, fig5, fig6, lambda-transient)
        opts: Shared experiment flags
        console: Console for standard output
        err_console: Console for error output
    """
    if which not in FIGURES:
        raise fail(err_console, UnknownFigureError(which, FIGURES))
    cfg, settings = prepare(opts, err_console)
    out_dir = cfg.output.out_dir

    try:
        total = figure_trials(cfg, which)
        with trial_progress(console, total, f"{which} trials", opts.quiet) as advance:
            result = figure(cfg, which, settings.workers, settings.chunk_size, advance)
        path = write_csv(out_dir / f"{which}.csv", result.header, result.rows)
        write_manifest(
            out_dir,
            f"figure {which}",
            cfg,
            [path],
            {"trials": result.trials, "bound_violations": result.bound_violations},
        )
    except PoissonNetError as e:
        raise fail(err_console, e) from e

    _display(console, result)
    if result.bound_violations:
        err_console.print(
            f"[yellow]Warning:[/] ergodicity bound violated at "
            f"{result.bound_violations} (round, node) point(s)"
        )
    if not opts.quiet:
        console.print(f"[dim]Wrote {path}[/]")


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def _display(console: Console, result: FigureResult) -> None:
    console.print(
        Panel(
            f"[bold]Figure:[/] {result.which}\n"
            f"[bold]Trials per point:[/] {result.trials}\n"
            f"[bold]Rows:[/] {len(result.rows)}",
            title="Figure data",
            border_style="blue",
        )
    )

    table = Table(show_header=True, header_style="bold")
    for name in result.header:
        table.add_column(name, justify="right")
    for row in result.rows[:PREVIEW_ROWS]:
        table.add_row(*(_cell(v) for v in row))
    console.print(table)
    if len(result.rows) > PREVIEW_ROWS:
        console.print(f"[dim]... {len(result.rows) - PREVIEW_ROWS} more rows in the CSV[/]")
