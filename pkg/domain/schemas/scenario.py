import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Device(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    x: float
    y: float
    rho: float = Field(ge=0, le=1)

    @property
    def position(self) -> tuple[float, float]:
        return self.x, self.y

    @property
    def distance_to_base(self) -> float:
        return math.hypot(self.x, self.y)


class WirelessScenario(BaseModel):
    """Devices around a base station at the origin, sharing one TDMA period."""

    model_config = ConfigDict(frozen=True)

    devices: tuple[Device, ...]
    p_max: float = Field(gt=0)

    @model_validator(mode="after")
    def check_devices(self):
        ids = sorted(d.id for d in self.devices)
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("device ids must be 1..n without gaps")
        for device in self.devices:
            if device.distance_to_base == 0:
                raise ValueError(f"device {device.id} sits on the base station")
        if sum(d.rho for d in self.devices) > 1 + 1e-12:
            raise ValueError("TDMA fractions sum to more than 1")
        return self

    @property
    def n(self) -> int:
        return len(self.devices)

    def device(self, i: int) -> Device:
        return next(d for d in self.devices if d.id == i)


class ImprovementRow(BaseModel):
    label: str
    capacity: float
    gain: float
    percent: float


class ImprovementReport(BaseModel):
    rows: list[ImprovementRow]
    network_mean: ImprovementRow
    network_weighted: ImprovementRow
