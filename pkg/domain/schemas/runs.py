from pydantic import BaseModel, ConfigDict, Field

from domain.core.constants import SCHEMA_VERSION
from domain.core.settings import Settings, settings
from domain.schemas.graph import Matching, Outcome
from domain.schemas.states import BalanceState, NashState, StableState
from domain.schemas.trajectory import Trajectory
from utils.enums import NoiseKind, SimulationMode


class RunConfig(BaseModel):
    dt: float = Field(gt=0)
    t_final: float = Field(gt=0)
    tol: float = Field(ge=0)
    sample_stride: int = Field(ge=1)
    seed: int
    noise_kind: NoiseKind
    noise_bound: float = Field(ge=0)
    threshold: float = Field(gt=0, lt=0.5)
    max_norm: float = Field(gt=0)
    prediction_dwell: int = Field(ge=0)

    @classmethod
    def from_settings(cls, source: Settings = settings, **overrides) -> "RunConfig":
        defaults = {
            "dt": source.DT,
            "t_final": source.T_FINAL,
            "tol": source.TOL,
            "sample_stride": source.SAMPLE_STRIDE,
            "seed": source.SEED,
            "noise_kind": source.NOISE_KIND,
            "noise_bound": source.NOISE_BOUND,
            "threshold": source.THRESHOLD,
            "max_norm": source.MAX_NORM,
            "prediction_dwell": source.PREDICTION_DWELL,
        }
        params = {**defaults, **{k: v for k, v in overrides.items() if v is not None}}
        return cls(**params)


class StableRunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    trajectory: Trajectory
    state: StableState
    t_end: float
    matching: Matching | None
    alloc: tuple[float, ...]
    kkt_residual: float
    stability_residual: float


class BalancedRunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    trajectory: Trajectory
    state: BalanceState
    outcome: Outcome
    t_end: float
    max_error: float


class NashRunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    trajectory: Trajectory
    state: NashState
    t_end: float
    outcome: Outcome | None
    settlement_time: float | None


class PredicateReport(BaseModel):
    valid: bool
    stable: bool
    balanced: bool
    nash: bool


class RunSummary(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    mode: SimulationMode
    graph: str
    status: str
    message: str = ""
    config: RunConfig
    matching: list[tuple[int, int]] | None = None
    alloc: list[float] | None = None
    predicates: PredicateReport | None = None
    kkt_residual: float | None = None
    stability_residual: float | None = None
    settlement_time: float | None = None
    t_end: float | None = None
    wall_time: float


class OracleVerdict(BaseModel):
    stable_outcome_exists: bool
    mwm_weight: float
    mwm_unique: bool
    matching_is_mwm: bool
    lp_relaxation_value: float
    lp_relaxation_integral: bool
    matches_nash_oracle: bool


class VerifyReport(BaseModel):
    claimed: str
    predicates: PredicateReport
    oracle: OracleVerdict
    confirmed: bool


class SweepRow(BaseModel):
    graph: str
    status: str
    settled: bool = False
    matches_oracle_mwm: bool | None = None
    is_nash: bool | None = None
    settlement_time: float | None = None
    error: str = ""
