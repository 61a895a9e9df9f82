"""Implementation of the 'theory' command."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.panel import Panel
from rich.table import Table

from poissonnet.cli.commands.common import CommonOptions, fail, prepare
from poissonnet.exceptions import PoissonNetError
from poissonnet.experiments.artifacts import write_csv, write_manifest
from poissonnet.experiments.report import theory_for_config

if TYPE_CHECKING:
    from rich.console import Console

    from poissonnet.theory.moments import TheoryReport

THEORY_HEADER = ["t", "var_bhom", "adhoc_mean", "adhoc_var", "adhoc_rmse"]


def theory_rows(report: TheoryReport) -> list[list[object]]:
    """Transient rows followed by the steady-state row."""
    lam = report.inputs.lambda_j
    rows: list[list[object]] = [
        [t, v, m.mean, m.var, m.rmse(lam)]
        for t, v, m in zip(report.times, report.var_bhom_t, report.adhoc_t, strict=True)
    ]
    rows.append(["steady", report.var_bhom, report.adhoc.mean, report.adhoc.var, report.rmse_adhoc])
    return rows


def run_theory(
    opts: CommonOptions,
    target_node: int | None,
    console: Console,
    err_console: Console,
) -> None:
    """Run the theory command.

    Args:
        opts: Shared experiment flags
        target_node: Node to analyse (defaults to the configured target)
        console: Console for standard output
        err_console: Console for error output
    """
    cfg, _ = prepare(opts, err_console, {"target_node": target_node})
    out_dir = cfg.output.out_dir

    try:
        report = theory_for_config(cfg)
        path = write_csv(out_dir / "theory.csv", THEORY_HEADER, theory_rows(report))
        write_manifest(
            out_dir,
            "theory",
            cfg,
            [path],
            {"crb": report.crb, "var_bhom": report.var_bhom, "rmse_eb": report.rmse_eb},
        )
    except PoissonNetError as e:
        raise fail(err_console, e) from e

    _display(console, report)
    if not opts.quiet:
        console.print(f"[dim]Wrote {path}[/]")


def _display(console: Console, report: TheoryReport) -> None:
    inputs = report.inputs
    console.print(
        Panel(
            f"[bold]Prior:[/] a={inputs.hp.a:g}, b={inputs.hp.b:g}\n"
            f"[bold]Nodes:[/] {len(inputs.sample_sizes)} (n = {inputs.n_total})\n"
            f"[bold]Target node:[/] {inputs.target_node} "
            f"(n_j = {inputs.n_j}, lambda_j = {inputs.lambda_j:g}, {inputs.participation})",
            title="Theory",
            border_style="blue",
        )
    )

    table = Table(show_header=True, header_style="bold")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("CRB on b", f"{report.crb:.6g}")
    table.add_row("Var[b_hom]", f"{report.var_bhom:.6g}")
    table.add_row("EB mean / variance", f"{report.eb.mean:.6g} / {report.eb.var:.6g}")
    table.add_row("Ad-hoc mean / variance", f"{report.adhoc.mean:.6g} / {report.adhoc.var:.6g}")
    table.add_row("RMSE dec", f"{report.rmse_dec:.6g}")
    table.add_row("RMSE EB", f"{report.rmse_eb:.6g} ({report.normalized_eb:.3f} x dec)")
    table.add_row(
        "RMSE ad-hoc", f"{report.rmse_adhoc:.6g} ({report.normalized_adhoc:.3f} x dec)"
    )
    if report.times:
        table.add_row(f"Var[b_hom_j({report.times[-1]})]", f"{report.var_bhom_t[-1]:.6g}")
    console.print(table)
