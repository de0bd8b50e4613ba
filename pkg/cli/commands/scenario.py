import logging
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from cli import runner
from cli.options import build_config, handle_domain_errors, run_options
from domain import services
from domain.core.errors import RunOutcomeError
from domain.schemas import ImprovementReport, WirelessScenario
from infrastructure.files import outputs
from infrastructure.files.graph_format import dump_graph
from infrastructure.files.scenario_format import load_scenario
from utils.enums import ExitCode

logger = logging.getLogger(__name__)

scenario_option = click.option(
    "--scenario", "scenario_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Scenario file; the frozen five-device scenario when omitted.",
)


def _scenario(path: Path | None) -> WirelessScenario:
    return services.load_reference_scenario() if path is None else load_scenario(path)


@click.command("scenario-gen")
@scenario_option
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Graph file to write; stdout when omitted.")
@handle_domain_errors
def scenario_gen_command(scenario_path: Path | None, out: Path | None):
    """Emit the bargaining graph of a wireless scenario in graph-file format."""
    g = services.build_graph(_scenario(scenario_path))
    text = dump_graph(g)
    if out is None:
        click.echo(text, nl=False)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def render_report(report: ImprovementReport) -> Table:
    table = Table(title="Improvements in capacity due to collaboration")
    table.add_column("device")
    table.add_column("c_i", justify="right")
    table.add_column("alpha_i", justify="right")
    table.add_column("% improvement", justify="right")
    for row in [*report.rows, report.network_mean, report.network_weighted]:
        table.add_row(row.label, f"{row.capacity:.3f}", f"{row.gain:.3f}", f"{row.percent:.1f}")
    return table


@click.command("report")
@scenario_option
@click.option("--oracle", "use_oracle", is_flag=True, help="Use the exact Nash oracle instead of simulating.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@run_options
@handle_domain_errors
def report_command(scenario_path: Path | None, use_oracle: bool, csv_path: Path | None, **params):
    """Per-device capacity gains of the Nash outcome of a wireless scenario."""
    config = build_config(params)
    sc = _scenario(scenario_path)
    g = services.build_graph(sc)

    if use_oracle:
        outcomes = services.nash_oracle(g)
        if not outcomes:
            click.echo("no Nash outcome exists for this scenario", err=True)
            raise SystemExit(int(ExitCode.undecided))
        outcome = outcomes[0]
    else:
        try:
            outcome = runner.nash_run(g, config, runner.disturbance_for(config)).outcome
        except RunOutcomeError as exc:
            click.echo(f"undecided: {exc}", err=True)
            raise SystemExit(int(ExitCode.undecided))

    report = services.improvement_report(sc, outcome)
    Console().print(render_report(report))
    click.echo(f"matching: {outcome.matching.sorted_pairs()}")

    if csv_path is not None:
        outputs.write_rows_csv([*report.rows, report.network_mean, report.network_weighted], csv_path)
