import logging
from pathlib import Path

import click

from cli import runner
from cli.options import build_config, handle_domain_errors, run_options
from domain import services
from domain.core.errors import DomainValidationError
from domain.core.settings import settings
from domain.schemas import SweepRow, WeightedGraph
from infrastructure.files import outputs
from infrastructure.files.graph_format import load_graph

logger = logging.getLogger(__name__)

SWEEP_FILE = "sweep.csv"


def _graphs_from_directory(directory: Path) -> tuple[list[tuple[str, WeightedGraph]], list[SweepRow]]:
    graphs, failures = [], []
    for path in sorted(directory.glob("*.grf")):
        try:
            graphs.append((path.stem, load_graph(path)))
        except DomainValidationError as exc:
            logger.warning(f"Sweep_graph_skipped path={path} error={exc}")
            failures.append(SweepRow(graph=path.stem, status="error", error=str(exc)))
    return graphs, failures


@click.command("sweep")
@click.option("--graphs", "graph_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory of *.grf files.")
@click.option("--family", type=int, default=None,
              help="Sweep every connected graph on up to this many agents with weights 1, 2, 3 instead.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--workers", type=int, default=None, help="Worker threads (default from settings).")
@run_options
@handle_domain_errors
def sweep_command(graph_dir: Path | None, family: int | None, out: Path, workers: int | None, **params):
    """Nash runs over many graphs, compared against the oracle, aggregated into sweep.csv."""
    config = build_config(params)
    if (graph_dir is None) == (family is None):
        raise DomainValidationError("give exactly one of --graphs and --family")

    if graph_dir is not None:
        graphs, failures = _graphs_from_directory(graph_dir)
    else:
        failures = []
        graphs = [(f"family_{k:05d}", g) for k, g in enumerate(services.small_graph_family(family))]

    rows = runner.sweep(graphs, config, out, workers or settings.MAX_WORKERS) + failures
    outputs.write_rows_csv(rows, out / SWEEP_FILE)

    passed = sum(1 for row in rows if row.settled and row.matches_oracle_mwm and row.is_nash)
    click.echo(f"{passed}/{len(rows)} runs settled on the oracle matching with a Nash outcome")
