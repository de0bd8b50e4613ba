import csv
import json

import pytest

from cli import runner
from cli.main import cli
from domain.core.errors import InvariantViolationError, OracleAssertionError
from tests.factories.graphs import make_four_cycle

PATH_GRAPH = "n 3\ne 1 2 1.2\ne 2 3 1\n"
TRIANGLE = "n 3\ne 1 2 1\ne 1 3 1\ne 2 3 1\n"
SINGLE_EDGE = "n 2\ne 1 2 1\n"
FAST = ["--dt", "0.01", "--t-final", "100", "--tol", "1e-3"]


def test_simulate__nash_on_path__settles_and_writes_files(cli_runner, write_file, tmp_path):
    graph = write_file("path.grf", PATH_GRAPH)
    out = tmp_path / "run"

    result = cli_runner.invoke(cli, ["simulate", "nash", "--graph", str(graph), "--out", str(out), *FAST])

    assert result.exit_code == 0, result.output
    assert "matching: [(1, 2)]" in result.stdout
    assert "is_nash=true" in result.stdout
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["schema"] == 1
    assert summary["status"] == "converged"
    assert summary["alloc"] == pytest.approx([0.1, 1.1, 0.0], abs=1e-2)
    assert (out / "trajectory.csv").exists()


def test_simulate__plot_data__per_figure_files(cli_runner, write_file, tmp_path):
    graph = write_file("path.grf", PATH_GRAPH)
    out = tmp_path / "plots"

    result = cli_runner.invoke(cli, ["simulate", "nash", "--graph", str(graph), "--out", str(out),
                                     "--emit-plot-data", "--noise-kind", "uniform", "--noise-bound", "1e-3", *FAST,
                                     "--tol", "1e-2"])

    assert result.exit_code == 0, result.output
    for name in ("allocations.csv", "matching_states.csv", "noisy_allocations.csv"):
        assert (out / name).exists()


def test_simulate__stable_on_triangle__undecided_exit(cli_runner, write_file, tmp_path):
    graph = write_file("triangle.grf", TRIANGLE)
    out = tmp_path / "tri"

    result = cli_runner.invoke(cli, ["simulate", "stable", "--graph", str(graph), "--out", str(out), *FAST])

    assert result.exit_code == 2
    assert "status: undecided" in result.stdout
    assert "no integral solution" in result.stdout
    assert (out / "trajectory.csv").exists()


def test_simulate__balanced_single_edge__even_split(cli_runner, write_file):
    graph = write_file("edge.grf", SINGLE_EDGE)
    matching = write_file("edge.match", "m 1 2\n")

    result = cli_runner.invoke(cli, ["simulate", "balanced", "--graph", str(graph), "--matching", str(matching),
                                     "--dt", "0.01", "--t-final", "30"])

    assert result.exit_code == 0, result.output
    assert "alloc: 0.5 0.5" in result.stdout


def test_simulate__balanced_without_matching__input_error(cli_runner, write_file):
    graph = write_file("edge.grf", SINGLE_EDGE)

    result = cli_runner.invoke(cli, ["simulate", "balanced", "--graph", str(graph)])

    assert result.exit_code == 4
    assert "balanced mode needs --matching" in result.stderr


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("n 2\ne 1 1 1\n", "self-loop"),
        ("n 2\ne 1 2 -1\n", "negative weight"),
    ]
)
def test_simulate__malformed_graph__input_error(cli_runner, write_file, text, fragment):
    graph = write_file("bad.grf", text)

    result = cli_runner.invoke(cli, ["simulate", "nash", "--graph", str(graph)])

    assert result.exit_code == 4
    assert fragment in result.stderr


def test_simulate__threshold_out_of_range__input_error(cli_runner, write_file):
    graph = write_file("edge.grf", SINGLE_EDGE)

    result = cli_runner.invoke(cli, ["simulate", "stable", "--graph", str(graph), "--threshold", "0.7"])

    assert result.exit_code == 4
    assert "invalid run parameters" in result.stderr


def test_simulate__tiny_norm_guard__diverged_exit(cli_runner, write_file):
    graph = write_file("edge.grf", SINGLE_EDGE)

    result = cli_runner.invoke(cli, ["simulate", "stable", "--graph", str(graph), "--max-norm", "0.1", *FAST])

    assert result.exit_code == 3
    assert "status: diverged" in result.stdout


@pytest.mark.parametrize(
    "error",
    [
        InvariantViolationError("alpha_s and s must stay nonnegative"),
        OracleAssertionError("balanced outcome is not stable"),
        RuntimeError("boom"),
    ],
    ids=lambda e: type(e).__name__,
)
def test_simulate__unexpected_failure__internal_error_exit_and_traceback_logged(
        cli_runner, write_file, tmp_path, monkeypatch, error):
    graph = write_file("edge.grf", SINGLE_EDGE)

    def fail(*args, **kwargs):
        raise error

    monkeypatch.setattr(runner, "simulate", fail)

    result = cli_runner.invoke(cli, ["simulate", "stable", "--graph", str(graph), *FAST])

    assert result.exit_code == 5
    assert "internal error" in result.output
    assert isinstance(result.exception, SystemExit)
    log = (tmp_path / "logs" / "cli.log").read_text(encoding="utf-8")
    assert type(error).__name__ in log
    assert "Traceback" in log


@pytest.mark.parametrize(
    "outcome, claim, code",
    [
        ("m 1 2\na 0.1 1.1 0\n", "nash", 0),
        ("m 1 2\na 0.1 1.1 0\n", "stable", 0),
        ("m 1 2\na 0.6 0.6 0\n", "nash", 1),
        ("m 1 2\na 0.6 0.6 0\n", "valid", 0),
        ("m 2 3\na 0 0.5 0.5\n", "stable", 1),
    ]
)
def test_verify__claims__exit_code(cli_runner, write_file, outcome, claim, code):
    graph = write_file("path.grf", PATH_GRAPH)
    outcome_path = write_file("claim.out", outcome)

    result = cli_runner.invoke(cli, ["verify", "--graph", str(graph), "--outcome", str(outcome_path),
                                     "--claim", claim])

    assert result.exit_code == code, result.output
    assert "confirmed" in result.stdout


def test_verify__json_report__oracle_fields(cli_runner, write_file, tmp_path):
    graph = write_file("path.grf", PATH_GRAPH)
    outcome_path = write_file("claim.out", "m 1 2\na 0.1 1.1 0\n")
    report_path = tmp_path / "report.json"

    result = cli_runner.invoke(cli, ["verify", "--graph", str(graph), "--outcome", str(outcome_path),
                                     "--json", str(report_path)])

    assert result.exit_code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["confirmed"] is True
    assert report["oracle"]["mwm_weight"] == pytest.approx(1.2)
    assert report["oracle"]["matches_nash_oracle"] is True


def test_verify__matching_outside_graph__input_error(cli_runner, write_file):
    graph = write_file("path.grf", PATH_GRAPH)
    outcome_path = write_file("claim.out", "m 1 3\na 0.5 0 0.5\n")

    result = cli_runner.invoke(cli, ["verify", "--graph", str(graph), "--outcome", str(outcome_path)])

    assert result.exit_code == 4


def test_scenario_gen__reference_scenario__graph_text(cli_runner):
    result = cli_runner.invoke(cli, ["scenario-gen"])

    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "n 5"
    assert [line.split()[1:3] for line in lines[1:]] == [["1", "2"], ["2", "3"], ["3", "4"], ["3", "5"], ["4", "5"]]


def test_scenario_gen__out_file__written(cli_runner, tmp_path):
    out = tmp_path / "five.grf"

    result = cli_runner.invoke(cli, ["scenario-gen", "--out", str(out)])

    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8").startswith("n 5\n")


def test_report__oracle__table_and_csv(cli_runner, tmp_path):
    csv_path = tmp_path / "report.csv"

    result = cli_runner.invoke(cli, ["report", "--oracle", "--csv", str(csv_path)])

    assert result.exit_code == 0, result.output
    assert "matching: [(2, 3), (4, 5)]" in result.stdout
    assert "% improvement" in result.stdout
    with csv_path.open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [row["label"] for row in rows] == ["1", "2", "3", "4", "5", "network", "network (rho-weighted)"]
    assert round(float(rows[1]["percent"]), 1) == 39.3


def test_report__missing_scenario_file__input_error(cli_runner, tmp_path):
    result = cli_runner.invoke(cli, ["report", "--scenario", str(tmp_path / "none.scn"), "--oracle"])
    assert result.exit_code == 4


@pytest.mark.slow
def test_sweep__family__one_row_per_graph(cli_runner, tmp_path):
    out = tmp_path / "sweep"

    result = cli_runner.invoke(cli, ["sweep", "--family", "3", "--out", str(out), "--workers", "2",
                                     "--dt", "0.01", "--t-final", "60"])

    assert result.exit_code == 0, result.output
    with (out / "sweep.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 19
    assert "runs settled on the oracle matching" in result.stdout


def test_sweep__graph_directory__bad_file_reported(cli_runner, tmp_path):
    graphs = tmp_path / "graphs"
    graphs.mkdir()
    (graphs / "edge.grf").write_text(SINGLE_EDGE, encoding="utf-8")
    (graphs / "cycle.grf").write_text(
        "n 4\n" + "".join(f"e {i} {j} {w}\n" for (i, j), w in make_four_cycle().weights.items()), encoding="utf-8"
    )
    (graphs / "broken.grf").write_text("e 1 2 1\n", encoding="utf-8")
    out = tmp_path / "sweep"

    result = cli_runner.invoke(cli, ["sweep", "--graphs", str(graphs), "--out", str(out), "--workers", "2", *FAST])

    assert result.exit_code == 0, result.output
    with (out / "sweep.csv").open(encoding="utf-8") as fh:
        rows = {row["graph"]: row for row in csv.DictReader(fh)}
    assert rows["broken"]["status"] == "error"
    assert rows["edge"]["settled"] == "True"
    assert rows["cycle"]["matches_oracle_mwm"] == "True"
    assert "2/3" in result.stdout


@pytest.mark.parametrize("args", [[], ["--graphs", ".", "--family", "3"]])
def test_sweep__source_not_exactly_one__input_error(cli_runner, tmp_path, args):
    result = cli_runner.invoke(cli, ["sweep", "--out", str(tmp_path / "o"), *args])
    assert result.exit_code == 4
