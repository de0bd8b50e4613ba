import logging
import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from domain.core.constants import DEFAULT_MAX_NORM, DEFAULT_SAMPLE_STRIDE, MAX_STEPS, STALL_STEPS
from domain.core.errors import DivergenceError, DomainValidationError

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]
Projection = Callable[[np.ndarray], np.ndarray]
Observer = Callable[[float, np.ndarray, np.ndarray], None]


class FlowRun(NamedTuple):
    y: np.ndarray
    t_end: float
    steps: int
    stalled: bool


def step_count(dt: float, t_final: float, max_steps: int = MAX_STEPS) -> int:
    if dt <= 0:
        raise DomainValidationError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise DomainValidationError(f"t_final must be nonnegative, got {t_final}")
    steps = math.ceil(t_final / dt - 1e-9)
    if steps > max_steps:
        raise DomainValidationError(f"{steps} steps exceed the guard of {max_steps}")
    return steps


def integrate_flow(
        field: Field,
        y0: np.ndarray,
        dt: float,
        t_final: float,
        *,
        project: Projection | None = None,
        observer: Observer | None = None,
        sample_stride: int = DEFAULT_SAMPLE_STRIDE,
        max_norm: float = DEFAULT_MAX_NORM,
        stall_tol: float | None = None,
        stall_steps: int = STALL_STEPS,
        max_steps: int = MAX_STEPS,
) -> FlowRun:
    """Fixed-step explicit Euler with an optional post-step projection.

    The observer sees (t, y, ẏ) at t = 0, every `sample_stride` steps and
    at the last step. With `stall_tol` set, integration stops once
    ‖ẏ‖∞ < stall_tol has held for `stall_steps` consecutive steps.
    """
    steps = step_count(dt, t_final, max_steps)
    y = np.array(y0, dtype=float)
    quiet = 0

    for k in range(steps + 1):
        t = k * dt
        dy = field(y)
        last = k == steps

        if stall_tol is not None:
            quiet = quiet + 1 if np.max(np.abs(dy), initial=0.0) < stall_tol else 0
            if quiet >= stall_steps:
                last = True

        if observer is not None and (k % sample_stride == 0 or last):
            observer(t, y, dy)
        if last:
            stalled = k < steps
            if stalled:
                logger.debug(f"Flow_stalled t={t:.6g} steps={k}")
            return FlowRun(y=y, t_end=t, steps=k, stalled=stalled)

        y = y + dt * dy
        if project is not None:
            y = project(y)

        norm = np.max(np.abs(y), initial=0.0)
        if not np.isfinite(norm) or norm > max_norm:
            logger.warning(f"Flow_diverged t={t + dt:.6g} norm={norm:.6g}")
            raise DivergenceError(f"state norm {norm:.6g} exceeded {max_norm:.6g} at t={t + dt:.6g}", t=t + dt)

    raise AssertionError("unreachable")
