import logging

import numpy as np
import pytest
from click.testing import CliRunner

from domain.core.settings import settings
from tests.factories.graphs import make_graph, make_single_edge, make_triangle


@pytest.fixture
def single_edge():
    return make_single_edge()


@pytest.fixture
def path_graph():
    """1 - 2 - 3 with weights 1.2 and 1."""
    return make_graph()


@pytest.fixture
def triangle():
    return make_triangle()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def cli_runner(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "LOG_FILE_PATH", tmp_path / "logs" / "cli.log")
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level

    yield CliRunner()

    for handler in root.handlers:
        handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)
    logging.captureWarnings(False)
