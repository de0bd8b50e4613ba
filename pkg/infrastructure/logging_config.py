import logging
import sys
from logging.handlers import RotatingFileHandler

from domain.core.settings import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _file_handler(formatter: logging.Formatter) -> logging.Handler:
    settings.LOG_FILE_PATH.parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(
        settings.LOG_FILE_PATH,
        maxBytes=settings.LOG_MAX_BYTES,
        backupCount=settings.LOG_BACKUP_COUNT,
    )
    handler.setFormatter(formatter)
    return handler


def _console_handler(formatter: logging.Formatter) -> logging.Handler:
    # stdout carries command output, so the console only gets warnings and up on stderr
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.WARNING)
    handler.setFormatter(formatter)
    return handler


def configure_logging(level: str | None = None):
    """Route every run's log to a rotating file; warnings also go to stderr.

    `level` overrides BARGAIN_LOG_LEVEL. numpy overflow warnings raised while a
    run diverges are captured into the same log.
    """
    level = (level or settings.LOG_LEVEL).upper()
    level_names = logging.getLevelNamesMapping() if hasattr(logging, "getLevelNamesMapping") else logging._nameToLevel
    if level not in level_names:
        raise ValueError(f"unknown log level: {level}")

    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
        if isinstance(handler, RotatingFileHandler):
            handler.close()

    root_logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT)
    root_logger.addHandler(_file_handler(formatter))
    root_logger.addHandler(_console_handler(formatter))

    logging.captureWarnings(True)
    logging.getLogger(__name__).debug(f"Logging_configured level={level} file={settings.LOG_FILE_PATH}")
