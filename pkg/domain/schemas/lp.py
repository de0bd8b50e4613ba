import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.sparse.linalg import LinearOperator

from domain.schemas.arrays import FloatArray


class LpProblem(BaseModel):
    """Standard form: min cᵀx s.t. Ax = b, x ≥ 0.

    `A` is either a dense matrix or a LinearOperator supplying the
    matrix-vector products `matvec` (Ax) and `rmatvec` (Aᵀy).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c: FloatArray
    A: np.ndarray | LinearOperator
    b: FloatArray

    @field_validator("A", mode="before")
    @classmethod
    def convert_matrix(cls, value):
        if isinstance(value, LinearOperator):
            return value
        matrix = np.array(value, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
        return matrix

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.A.shape != (self.b.shape[0], self.c.shape[0]):
            raise ValueError(
                f"A has shape {self.A.shape}, expected {(self.b.shape[0], self.c.shape[0])}"
            )
        return self

    @property
    def n_x(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def is_dense(self) -> bool:
        return isinstance(self.A, np.ndarray)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.A @ x if self.is_dense else self.A.matvec(x)

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        return self.A.T @ y if self.is_dense else self.A.rmatvec(y)


class LpState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: FloatArray
    z: FloatArray

    def pack(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    @classmethod
    def unpack(cls, y: np.ndarray, n_x: int) -> "LpState":
        return cls(x=y[:n_x].copy(), z=y[n_x:].copy())
