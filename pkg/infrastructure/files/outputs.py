import csv
import logging
from collections.abc import Sequence
from pathlib import Path

from pydantic import BaseModel

from domain.schemas import Trajectory

logger = logging.getLogger(__name__)


def format_number(value: float) -> str:
    return format(value, ".12g")


def write_trajectory_csv(trajectory: Trajectory, path: Path, columns: Sequence[str] | None = None) -> None:
    """Write `columns` (all by default, `t` always first) with a fixed number format."""
    names = list(trajectory.columns) if columns is None else ["t", *[c for c in columns if c != "t"]]
    index = [trajectory.columns.index(name) for name in names]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in trajectory.rows:
            writer.writerow([format_number(row[k]) for k in index])
    logger.debug(f"Trajectory_written path={path} rows={len(trajectory)}")


def write_plot_data(trajectory: Trajectory, directory: Path, noisy: Trajectory | None = None) -> list[Path]:
    """Per-figure CSVs from a noiseless run, plus the allocations of a perturbed run when given."""
    directory = Path(directory)
    written = []
    allocations = [c for c in trajectory.columns if c.startswith(("alpha_b_", "alpha_s_"))]
    if any(c.startswith("alpha_b_") for c in allocations):
        allocations = [c for c in allocations if c.startswith("alpha_b_")]

    matching_states = [c for c in trajectory.columns if c.startswith("m_")]
    targets = [(trajectory, "allocations.csv", allocations), (trajectory, "matching_states.csv", matching_states)]
    if noisy is not None:
        targets.append((noisy, "noisy_allocations.csv", allocations))

    for source, name, columns in targets:
        if not columns:
            continue
        write_trajectory_csv(source, directory / name, columns)
        written.append(directory / name)
    return written


def write_json(model: BaseModel, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(by_alias=True, indent=2), encoding="utf-8")


def write_rows_csv(rows: Sequence[BaseModel], path: Path) -> None:
    """One CSV line per model, header from the first model's fields."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if not rows:
            return
        fields = list(type(rows[0]).model_fields)
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            values = row.model_dump(mode="json")
            writer.writerow([
                format_number(v) if isinstance(v, float) else ("" if v is None else v)
                for v in (values[f] for f in fields)
            ])
