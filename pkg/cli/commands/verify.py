from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from cli import runner
from cli.options import handle_domain_errors
from domain.core.settings import settings
from infrastructure.files import outputs
from infrastructure.files.graph_format import load_graph, load_outcome
from utils.enums import ExitCode, OutcomeClass


@click.command("verify")
@click.option("--graph", "graph_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--outcome", "outcome_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--claim", type=click.Choice([c.value for c in OutcomeClass]), default=OutcomeClass.nash.value)
@click.option("--tol", type=float, default=None, help="Predicate tolerance (default from settings).")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@handle_domain_errors
def verify_command(graph_path: Path, outcome_path: Path, claim: str, tol: float | None, json_path: Path | None):
    """Check an outcome file against the predicates and the brute-force oracle."""
    g = load_graph(graph_path)
    outcome = load_outcome(outcome_path, g.n)
    report = runner.verify(g, outcome, OutcomeClass(claim), settings.TOL if tol is None else tol)

    table = Table(title=f"{graph_path.name}: claimed {claim}")
    table.add_column("check")
    table.add_column("result", justify="right")
    for name, value in report.predicates.model_dump().items():
        table.add_row(f"is_{name}", str(value).lower())
    for name, value in report.oracle.model_dump().items():
        table.add_row(f"oracle.{name}", f"{value:.6g}" if isinstance(value, float) else str(value).lower())
    table.add_row("confirmed", str(report.confirmed).lower())
    Console().print(table)

    if json_path is not None:
        outputs.write_json(report, json_path)
    raise SystemExit(int(ExitCode.ok if report.confirmed else ExitCode.not_confirmed))
