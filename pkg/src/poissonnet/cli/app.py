"""Main Typer application for the poissonnet CLI."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.console import Console

from poissonnet import __version__
from poissonnet.cli.commands.common import CommonOptions

# Create the main Typer app
app = typer.Typer(
    name="poissonnet",
    help="Distributed empirical-Bayes estimation of Poisson rates over sensor networks.",
    no_args_is_help=True,
    rich_markup_mode="rich",
    pretty_exceptions_show_locals=False,
)

# Console for rich output
console = Console()
err_console = Console(stderr=True)


# =============================================================================
# Shared options
# =============================================================================

ConfigOption = Annotated[
    Path | None,
    typer.Option("--config", "-c", help="JSON experiment configuration."),
]
SeedOption = Annotated[int | None, typer.Option("--seed", "-s", min=0, help="Root seed.")]
TrialsOption = Annotated[
    int | None, typer.Option("--trials", "-m", min=1, help="Monte Carlo trials M.")
]
RoundsOption = Annotated[
    int | None, typer.Option("--rounds", "-t", min=0, help="Communication rounds T.")
]
OutDirOption = Annotated[
    Path | None, typer.Option("--out-dir", "-o", help="Directory for CSVs and the manifest.")
]
WorkersOption = Annotated[
    int | None, typer.Option("--workers", "-w", min=1, help="Worker processes.")
]
PaperScaleOption = Annotated[
    bool, typer.Option("--paper-scale", help="Use M = 50,000 trials unless --trials is given.")
]
FreezeOption = Annotated[
    bool | None,
    typer.Option(
        "--freeze-graph/--redraw-graph",
        help="Keep one random-graph realisation for all trials, or redraw it per trial.",
        show_default=False,
    ),
]
LogLevelOption = Annotated[
    str | None, typer.Option("--log-level", help="Log level (DEBUG, INFO, WARNING, ...).")
]
QuietOption = Annotated[
    bool, typer.Option("--quiet", "-q", help="No progress bar or file listing.")
]


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold blue]poissonnet[/] version [green]{__version__}[/]")
        raise typer.Exit


@app.callback()
def main(
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            "-V",
            help="Show version and exit.",
            callback=version_callback,
            is_eager=True,
        ),
    ] = None,
) -> None:
    """poissonnet: distributed Poisson-rate estimation.

    [bold]Commands:[/]

    • [cyan]simulate[/]            One seeded trial with per-round readout
    • [cyan]montecarlo[/]          Monte Carlo statistics of the configured estimators
    • [cyan]figure[/]              Data behind fig3, fig4, fig5, fig6 or lambda-transient
    • [cyan]theory[/]              Closed-form predictions for a configuration
    • [cyan]check-connectivity[/]  Joint strong connectivity of the schedule

    [bold]Configuration:[/]

    Defaults < [cyan]--config[/] file < POISSONNET_* environment < flags.
    """


@app.command()
def simulate(
    config: ConfigOption = None,
    seed: SeedOption = None,
    rounds: RoundsOption = None,
    out_dir: OutDirOption = None,
    freeze_graph: FreezeOption = None,
    log_level: LogLevelOption = None,
    quiet: QuietOption = False,
    trial: Annotated[
        int, typer.Option("--trial", min=0, help="Trial whose seeds are used.")
    ] = 0,
) -> None:
    """Run one seeded trial of ad-hoc and/or EB with full per-round readout.

    Writes [cyan]simulate-adhoc.csv[/] and [cyan]simulate-eb.csv[/] and prints
    the final consensus residuals and the gaps to b_ML and sigma/(a n).

    [bold]Example:[/]

        $ poissonnet simulate --rounds 200 --seed 7
    """
    from poissonnet.cli.commands.simulate import run_simulate

    opts = CommonOptions(
        config=config,
        seed=seed,
        rounds=rounds,
        out_dir=out_dir,
        freeze_graph=freeze_graph,
        log_level=log_level,
        quiet=quiet,
    )
    run_simulate(opts=opts, trial=trial, console=console, err_console=err_console)


@app.command()
def montecarlo(
    config: ConfigOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    rounds: RoundsOption = None,
    out_dir: OutDirOption = None,
    workers: WorkersOption = None,
    paper_scale: PaperScaleOption = False,
    freeze_graph: FreezeOption = None,
    log_level: LogLevelOption = None,
    quiet: QuietOption = False,
) -> None:
    """Run M seeded trials and write per-round statistics.

    Writes [cyan]montecarlo.csv[/] with mean, variance, standard error and
    RMSE of every recorded series. Results do not depend on [cyan]--workers[/].

    [bold]Example:[/]

        $ poissonnet montecarlo --trials 10000 --workers 4
    """
    from poissonnet.cli.commands.montecarlo import run_montecarlo_command

    opts = CommonOptions(
        config=config,
        seed=seed,
        trials=trials,
        rounds=rounds,
        out_dir=out_dir,
        workers=workers,
        paper_scale=paper_scale,
        freeze_graph=freeze_graph,
        log_level=log_level,
        quiet=quiet,
    )
    run_montecarlo_command(opts=opts, console=console, err_console=err_console)


@app.command()
def figure(
    which: Annotated[
        str,
        typer.Argument(help="Figure id: fig3, fig4, fig5, fig6 or lambda-transient."),
    ],
    config: ConfigOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    rounds: RoundsOption = None,
    out_dir: OutDirOption = None,
    workers: WorkersOption = None,
    paper_scale: PaperScaleOption = False,
    freeze_graph: FreezeOption = None,
    log_level: LogLevelOption = None,
    quiet: QuietOption = False,
) -> None:
    """Compute the data behind one figure and write [cyan]<figure>.csv[/].

    [bold]Figures:[/]

    • fig3              RMSE of b_hom_i(t) on the fixed graph
    • fig4              The same on a frozen Erdos-Renyi schedule
    • fig5              RMSE of b_hom and b_ML against N, with the CRB
    • fig6              Normalised RMSE of the rate estimators against N
    • lambda-transient  RMSE of the ad-hoc rate estimates over time

    [bold]Example:[/]

        $ poissonnet figure fig3 --trials 10000
        $ poissonnet figure fig6 --paper-scale --workers 8
    """
    from poissonnet.cli.commands.figure import run_figure

    opts = CommonOptions(
        config=config,
        seed=seed,
        trials=trials,
        rounds=rounds,
        out_dir=out_dir,
        workers=workers,
        paper_scale=paper_scale,
        freeze_graph=freeze_graph,
        log_level=log_level,
        quiet=quiet,
    )
    run_figure(which=which, opts=opts, console=console, err_console=err_console)


@app.command()
def theory(
    config: ConfigOption = None,
    rounds: RoundsOption = None,
    out_dir: OutDirOption = None,
    log_level: LogLevelOption = None,
    quiet: QuietOption = False,
    target_node: Annotated[
        int | None,
        typer.Option("--node", "-j", min=1, help="Node to analyse (default: the last node)."),
    ] = None,
) -> None:
    """Print the closed-form predictions for a configuration.

    Reports the CRB, the steady-state variance of b_hom, the EB and ad-hoc
    moments at the target node, and writes the transient predictions for
    t = 0..T to [cyan]theory.csv[/].

    [bold]Example:[/]

        $ poissonnet theory --config configs/fig6.json --node 20
    """
    from poissonnet.cli.commands.theory import run_theory

    opts = CommonOptions(
        config=config, rounds=rounds, out_dir=out_dir, log_level=log_level, quiet=quiet
    )
    run_theory(opts=opts, target_node=target_node, console=console, err_console=err_console)


@app.command("check-connectivity")
def check_connectivity(
    config: ConfigOption = None,
    seed: SeedOption = None,
    log_level: LogLevelOption = None,
    window: Annotated[
        int | None,
        typer.Option("--window", "-Q", min=1, help="Window length Q; searched when omitted."),
    ] = None,
    horizon: Annotated[
        int, typer.Option("--horizon", min=1, help="Number of slots to cover.")
    ] = 1000,
) -> None:
    """Check joint strong connectivity of the configured schedule.

    Exits with status 1 when the schedule is not jointly strongly connected.

    [bold]Example:[/]

        $ poissonnet check-connectivity --window 36 --horizon 3600
    """
    from poissonnet.cli.commands.connectivity import run_check_connectivity

    opts = CommonOptions(config=config, seed=seed, log_level=log_level)
    run_check_connectivity(
        opts=opts, window=window, horizon=horizon, console=console, err_console=err_console
    )
