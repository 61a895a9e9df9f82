"""Implementation of the 'check-connectivity' command."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.panel import Panel

from poissonnet.cli.commands.common import CommonOptions, fail, prepare
from poissonnet.exceptions import PoissonNetError
from poissonnet.experiments.montecarlo import trial_schedule
from poissonnet.graph.connectivity import min_joint_window, verify_joint_connectivity

if TYPE_CHECKING:
    from rich.console import Console


def run_check_connectivity(
    opts: CommonOptions,
    window: int | None,
    horizon: int,
    console: Console,
    err_console: Console,
) -> None:
    """Run the check-connectivity command.

    With a window length, checks that window; otherwise searches for the
    smallest window that passes over the horizon. Exits with status 1 when
    the schedule is not jointly strongly connected.

    Args:
        opts: Shared experiment flags
        window: Window length Q, or None to search
        horizon: Number of slots to cover
        console: Console for standard output
        err_console: Console for error output
    """
    cfg, _ = prepare(opts, err_console)

    try:
        sched = trial_schedule(cfg)
        if window is None:
            found = min_joint_window(sched, horizon)
            connected = found is not None
            detail = (
                f"[bold]Smallest window:[/] Q = {found}"
                if connected
                else f"[bold]Smallest window:[/] none up to {horizon}"
            )
        else:
            report = verify_joint_connectivity(sched, window, horizon)
            connected = report.connected
            detail = f"[bold]Window:[/] Q = {window} ({report.windows_checked} checked)"
            if report.failing_window is not None:
                detail += f"\n[bold]First failing window:[/] {report.failing_window}"
    except PoissonNetError as e:
        raise fail(err_console, e) from e

    status = "[green]jointly strongly connected[/]" if connected else "[red]not connected[/]"
    console.print(
        Panel(
            f"[bold]Schedule:[/] {cfg.schedule.kind} with N = {cfg.N}\n"
            f"[bold]Horizon:[/] {horizon}\n"
            f"{detail}\n"
            f"[bold]Result:[/] {status}",
            title="Connectivity",
            border_style="green" if connected else "red",
        )
    )
    if not connected:
        raise SystemExit(1)
