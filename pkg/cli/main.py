import click

from cli.commands import register_commands
from infrastructure.logging_config import configure_logging


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Overrides BARGAIN_LOG_LEVEL for this invocation.")
def cli(log_level: str | None):
    """Distributed bargaining dynamics on exchange networks."""
    configure_logging(log_level)


register_commands(cli)
