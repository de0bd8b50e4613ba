import logging
from pathlib import Path

import click

from cli import runner
from cli.options import build_config, handle_domain_errors, run_options
from domain.core.errors import DomainValidationError
from infrastructure.files.graph_format import load_graph, load_matching
from utils.enums import SimulationMode

logger = logging.getLogger(__name__)


@click.command("simulate")
@click.argument("mode", type=click.Choice([m.value for m in SimulationMode]))
@click.option("--graph", "graph_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--matching", "matching_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Matching file (`m i j` lines), required in balanced mode.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for trajectory.csv and summary.json.")
@click.option("--emit-plot-data", is_flag=True, help="Also write allocations.csv and matching_states.csv.")
@run_options
@handle_domain_errors
def simulate_command(mode: str, graph_path: Path, matching_path: Path | None, out: Path | None,
                     emit_plot_data: bool, **params):
    """Run the stable, balanced or Nash dynamics on a graph file."""
    config = build_config(params)
    mode = SimulationMode(mode)
    g = load_graph(graph_path)

    matching = None
    if mode == SimulationMode.balanced:
        if matching_path is None:
            raise DomainValidationError("balanced mode needs --matching")
        matching = load_matching(matching_path)

    summary, code = runner.simulate(
        mode, g, config, graph_label=graph_path.stem, matching=matching, out=out, emit_plot_data=emit_plot_data
    )

    click.echo(f"status: {summary.status}")
    if summary.message:
        click.echo(f"message: {summary.message}")
    if summary.matching is not None:
        click.echo(f"matching: {summary.matching}")
        click.echo("alloc: " + " ".join(f"{a:.6g}" for a in summary.alloc))
    if summary.predicates is not None:
        click.echo(f"is_nash={str(summary.predicates.nash).lower()} "
                   f"is_stable={str(summary.predicates.stable).lower()} "
                   f"is_balanced={str(summary.predicates.balanced).lower()}")
    if summary.settlement_time is not None:
        click.echo(f"settlement_time: {summary.settlement_time:.6g}")

    raise SystemExit(int(code))
