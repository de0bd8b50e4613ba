"""Options shared by the simulation commands and the mapping of domain errors to exit codes."""
import logging
from functools import wraps

import click

from domain.core.errors import DivergenceError, DomainError, DomainValidationError, RunOutcomeError
from domain.schemas import RunConfig
from utils.enums import ExitCode, NoiseKind

logger = logging.getLogger(__name__)


def run_options(fn):
    """Every tunable run parameter; unset flags fall back to the settings."""
    options = [
        click.option("--dt", type=float, default=None, help="Euler step (default 1e-3)."),
        click.option("--t-final", type=float, default=None, help="Integration horizon (default 100)."),
        click.option("--tol", type=float, default=None, help="Predicate tolerance (default 1e-4)."),
        click.option("--sample-stride", type=int, default=None, help="Record every k-th step (default 100)."),
        click.option("--seed", type=int, default=None, help="Disturbance seed."),
        click.option("--noise-kind", type=click.Choice([k.value for k in NoiseKind]), default=None),
        click.option("--noise-bound", type=float, default=None, help="Disturbance bound δ."),
        click.option("--threshold", type=float, default=None, help="Matching extraction threshold (default 0.25)."),
        click.option("--max-norm", type=float, default=None, help="Divergence guard on the state sup-norm."),
        click.option("--prediction-dwell", type=int, default=None, help="Steps a new partner prediction must persist."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


RUN_OPTION_NAMES = (
    "dt", "t_final", "tol", "sample_stride", "seed", "noise_kind", "noise_bound", "threshold", "max_norm",
    "prediction_dwell",
)


def build_config(params: dict) -> RunConfig:
    """RunConfig from settings overridden by the flags that were given."""
    overrides = {name: params.pop(name) for name in RUN_OPTION_NAMES}
    try:
        return RunConfig.from_settings(**overrides)
    except ValueError as exc:
        raise DomainValidationError(f"invalid run parameters: {exc}") from exc


def handle_domain_errors(fn):
    """Map domain errors to exit codes; unexpected failures are logged with their traceback."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainValidationError as e:
            click.echo(f"error: {e}", err=True)
            raise SystemExit(int(ExitCode.input_error))
        except DivergenceError as e:
            click.echo(f"diverged: {e}", err=True)
            raise SystemExit(int(ExitCode.diverged))
        except RunOutcomeError as e:
            click.echo(f"undecided: {e}", err=True)
            raise SystemExit(int(ExitCode.undecided))
        except click.ClickException:
            raise
        except DomainError as e:
            logger.exception(f"Command_failed command={fn.__name__} error={type(e).__name__}")
            click.echo(f"internal error: {e}", err=True)
            raise SystemExit(int(ExitCode.internal_error))
        except Exception as e:
            logger.exception(f"Command_crashed command={fn.__name__} error={type(e).__name__}")
            click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
            raise SystemExit(int(ExitCode.internal_error))

    return wrapper
