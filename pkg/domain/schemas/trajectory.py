import numpy as np
from pydantic import BaseModel, Field


class Trajectory(BaseModel):
    """Time-indexed samples; the first column is always `t`."""

    columns: list[str]
    rows: list[list[float]] = Field(default_factory=list)

    def append(self, t: float, *values) -> None:
        row = [float(t)]
        for value in values:
            row.extend(np.ravel(value).tolist())
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, expected {len(self.columns)}")
        self.rows.append(row)

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([row[k] for row in self.rows])

    def columns_like(self, prefix: str) -> np.ndarray:
        """Samples × columns array of every column whose name starts with `prefix`."""
        ks = [k for k, name in enumerate(self.columns) if name.startswith(prefix)]
        return np.array([[row[k] for k in ks] for row in self.rows]).reshape(len(self.rows), len(ks))

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def __len__(self) -> int:
        return len(self.rows)
