import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from domain.schemas.arrays import FloatArray
from utils.enums import NoiseKind


class StableState(BaseModel):
    """Agent states of the stable dynamics; `s` and `m` follow the graph's edge order."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    alpha_s: FloatArray
    s: FloatArray
    m: FloatArray

    @classmethod
    def zeros(cls, n: int, n_edges: int) -> "StableState":
        return cls(alpha_s=np.zeros(n), s=np.zeros(n_edges), m=np.zeros(n_edges))

    def pack(self) -> np.ndarray:
        return np.concatenate([self.alpha_s, self.s, self.m])

    @classmethod
    def unpack(cls, y: np.ndarray, n: int, n_edges: int) -> "StableState":
        return cls(
            alpha_s=y[:n].copy(),
            s=y[n:n + n_edges].copy(),
            m=y[n + n_edges:n + 2 * n_edges].copy(),
        )


class BalanceState(BaseModel):
    """Allocation α^b of the balancing dynamics; entries may be transiently negative."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    alpha_b: FloatArray


class BalanceErrors(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    e: FloatArray


class NashState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    stable: StableState
    alpha_b: FloatArray

    @classmethod
    def zeros(cls, n: int, n_edges: int) -> "NashState":
        return cls(stable=StableState.zeros(n, n_edges), alpha_b=np.zeros(n))

    def pack(self) -> np.ndarray:
        return np.concatenate([self.stable.pack(), self.alpha_b])

    @classmethod
    def unpack(cls, y: np.ndarray, n: int, n_edges: int) -> "NashState":
        split = n + 2 * n_edges
        return cls(stable=StableState.unpack(y[:split], n, n_edges), alpha_b=y[split:].copy())


class DisturbanceSpec(BaseModel):
    kind: NoiseKind = NoiseKind.none
    bound: float = Field(default=0.0, ge=0)
    seed: int = 0
    sigma: float | None = Field(default=None, gt=0)
