import logging

import numpy as np
from scipy.stats import truncnorm

from domain.schemas.states import DisturbanceSpec
from utils.enums import NoiseKind

logger = logging.getLogger(__name__)

INPUT_CHANNELS = ("alpha_s", "s", "m", "alpha_b")
ALL_CHANNELS = INPUT_CHANNELS + ("field",)


class Disturbance:
    """Seeded bounded noise for the perturbed cascade.

    Every call to `draw` returns one sample per state component for the
    input channels (added to the state before the vector field is
    evaluated) and one for the field channel (added to the derivative).
    Samples never exceed `spec.bound` in absolute value.
    """

    BLOCK = 1024

    def __init__(self, spec: DisturbanceSpec, channels: tuple[str, ...] = ALL_CHANNELS):
        unknown = set(channels) - set(ALL_CHANNELS)
        if unknown:
            raise ValueError(f"unknown disturbance channels {sorted(unknown)}")
        self.spec = spec
        self.channels = channels
        self.rng = np.random.default_rng(spec.seed)
        self._buffer = np.empty(0)
        self._cursor = 0

    @property
    def active(self) -> bool:
        return self.spec.kind != NoiseKind.none and self.spec.bound > 0

    @property
    def sigma(self) -> float:
        return self.spec.sigma if self.spec.sigma is not None else self.spec.bound / 3

    def _refill(self, size: int) -> None:
        count = self.BLOCK * size
        bound = self.spec.bound
        if self.spec.kind == NoiseKind.uniform:
            self._buffer = self.rng.uniform(-bound, bound, count)
        else:
            limit = bound / self.sigma
            self._buffer = truncnorm.rvs(-limit, limit, scale=self.sigma, size=count, random_state=self.rng)
        self._cursor = 0

    def sample(self, size: int) -> np.ndarray:
        if not self.active or size == 0:
            return np.zeros(size)
        if self._cursor + size > self._buffer.size:
            self._refill(size)
        chunk = self._buffer[self._cursor:self._cursor + size]
        self._cursor += size
        return chunk

    def draw(self, layout: dict[str, slice], size: int) -> tuple[np.ndarray, np.ndarray]:
        """Return (input noise, field noise) for a state vector of `size` entries.

        `layout` maps input channel names to their slice of the state vector.
        """
        d_input = np.zeros(size)
        for name in INPUT_CHANNELS:
            if name in self.channels and name in layout:
                part = layout[name]
                d_input[part] = self.sample(part.stop - part.start)
        d_field = self.sample(size) if "field" in self.channels else np.zeros(size)
        return d_input, d_field


def make_disturbance(spec: DisturbanceSpec | None) -> Disturbance | None:
    if spec is None or spec.kind == NoiseKind.none or spec.bound == 0:
        return None
    logger.info(f"Disturbance_enabled kind={spec.kind.value} bound={spec.bound} seed={spec.seed}")
    return Disturbance(spec)
