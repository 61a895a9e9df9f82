"""Implementation of the 'simulate' command.

Runs one seeded trial of the distributed estimators and writes every
recorded round to CSV.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.panel import Panel
from rich.table import Table

from poissonnet.cli.commands.common import CommonOptions, fail, prepare
from poissonnet.exceptions import PoissonNetError
from poissonnet.experiments.artifacts import write_csv, write_manifest
from poissonnet.experiments.simulate import ROUND_HEADERS, SimulationResult, simulate

if TYPE_CHECKING:
    from pathlib import Path

    from rich.console import Console


def run_simulate(
    opts: CommonOptions,
    trial: int,
    console: Console,
    err_console: Console,
) -> None:
    """Run the simulate command.

    Args:
        opts: Shared experiment flags
        trial: Trial index whose seeds are used
        console: Console for standard output
        err_console: Console for error output
    """
    cfg, _ = prepare(opts, err_console)
    out_dir = cfg.output.out_dir

    try:
        result = simulate(cfg, trial)
        artifacts: list[Path] = [
            write_csv(out_dir / f"simulate-{name}.csv", ROUND_HEADERS[name], result.rows(name))
            for name in result.traces
        ]
        write_manifest(
            out_dir,
            "simulate",
            cfg,
            artifacts,
            {name: _summary_dict(result, name) for name in result.summaries},
        )
    except PoissonNetError as e:
        raise fail(err_console, e) from e

    _display(console, result, cfg.T)
    if not opts.quiet:
        for path in artifacts:
            console.print(f"[dim]Wrote {path}[/]")


def _summary_dict(result: SimulationResult, name: str) -> dict[str, float | None]:
    s = result.summaries[name]
    return {"residual": s.residual, "gap_ml": s.gap_ml, "gap_hom": s.gap_hom}


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3e}"


def _display(console: Console, result: SimulationResult, T: int) -> None:
    sigma, n = result.data.sigma_total, result.data.n_total
    b_ml = "undefined" if result.b_ml is None else f"{result.b_ml:.6g}"
    console.print(
        Panel(
            f"[bold]Trial:[/] {result.trial}\n"
            f"[bold]Rounds:[/] {T}\n"
            f"[bold]Arrivals:[/] {sigma} over {n} samples\n"
            f"[bold]b_hom = sigma/(a n):[/] {result.b_hom:.6g}\n"
            f"[bold]b_ML:[/] {b_ml}",
            title="Simulation",
            border_style="blue",
        )
    )

    table = Table(title="Final round", show_header=True, header_style="bold")
    table.add_column("Estimator", style="cyan")
    table.add_column("Consensus residual", justify="right")
    table.add_column("max |b_i - b_ML|", justify="right")
    table.add_column("max |b_i - b_hom|", justify="right")
    for name, s in result.summaries.items():
        table.add_row(name, _fmt(s.residual), _fmt(s.gap_ml), _fmt(s.gap_hom))
    console.print(table)
