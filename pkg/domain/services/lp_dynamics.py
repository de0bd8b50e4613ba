"""Projected saddle-point dynamics for standard-form linear programs.

    ẋ_i = f_i(x, z)            if x_i > 0
    ẋ_i = max{0, f_i(x, z)}    if x_i = 0
    ż   = Ax − b
    f   = −c − Aᵀ(Ax − b + z)

Equilibria are exactly the KKT points (x*, z*), where x* solves the LP
and z* solves its dual max{−bᵀz : Aᵀz + c ≥ 0}.
"""
import logging
from collections.abc import Callable, Sequence
from typing import NamedTuple

import numpy as np

from domain.core.constants import DEFAULT_MAX_NORM, DEFAULT_SAMPLE_STRIDE, MAX_STEPS, STALL_STEPS
from domain.core.errors import DIMENSION_MISMATCH, DomainValidationError, InvariantViolationError
from domain.schemas import LpProblem, LpState, Trajectory
from domain.services.integrator import integrate_flow

logger = logging.getLogger(__name__)

LpObserver = Callable[[float, LpState, float], None]
ExtraColumn = tuple[str, Callable[[LpState], float]]


class LpRun(NamedTuple):
    trajectory: Trajectory
    state: LpState
    t_end: float
    stalled: bool


def _check_state(p: LpProblem, x: np.ndarray, z: np.ndarray) -> None:
    if x.shape != (p.n_x,) or z.shape != (p.m,):
        raise DomainValidationError(
            f"{DIMENSION_MISMATCH}: x{x.shape} z{z.shape} for n_x={p.n_x} m={p.m}"
        )


def _nominal_flow(p: LpProblem, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    return -p.c - p.rmatvec(p.matvec(x) - p.b + z)


def _projected_field(p: LpProblem, x: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    f = _nominal_flow(p, x, z)
    x_dot = np.where(x > 0, f, np.maximum(f, 0.0))
    z_dot = p.matvec(x) - p.b
    return x_dot, z_dot


def nominal_flow(p: LpProblem, s: LpState) -> np.ndarray:
    _check_state(p, s.x, s.z)
    return _nominal_flow(p, s.x, s.z)


def projected_rhs(p: LpProblem, s: LpState) -> tuple[np.ndarray, np.ndarray]:
    _check_state(p, s.x, s.z)
    if np.any(s.x < 0):
        raise InvariantViolationError(f"primal state left the nonnegative orthant: min x = {s.x.min():.3g}")
    return _projected_field(p, s.x, s.z)


def kkt_residual(p: LpProblem, s: LpState) -> float:
    """Largest violation among primal feasibility, x ≥ 0, dual feasibility and complementarity.

    Dual feasibility is Aᵀz + c ≥ 0 so that it pairs with the
    complementarity term (Aᵀz + c)ᵀx.
    """
    _check_state(p, s.x, s.z)
    reduced = p.rmatvec(s.z) + p.c
    return max(
        float(np.max(np.abs(p.matvec(s.x) - p.b), initial=0.0)),
        float(-np.min(s.x, initial=0.0)),
        float(-np.min(reduced, initial=0.0)),
        abs(float(reduced @ s.x)),
    )


def default_columns(p: LpProblem) -> list[str]:
    return [f"x_{k}" for k in range(1, p.n_x + 1)] + [f"z_{k}" for k in range(1, p.m + 1)]


def run(
        p: LpProblem,
        s0: LpState,
        dt: float,
        t_final: float,
        observer: LpObserver | None = None,
        *,
        state_columns: Sequence[str] | None = None,
        extra_columns: Sequence[ExtraColumn] = (),
        sample_stride: int = DEFAULT_SAMPLE_STRIDE,
        max_norm: float = DEFAULT_MAX_NORM,
        stall_tol: float | None = None,
        stall_steps: int = STALL_STEPS,
        max_steps: int = MAX_STEPS,
) -> LpRun:
    _check_state(p, s0.x, s0.z)
    if np.any(s0.x < 0):
        raise InvariantViolationError("initial primal state must be nonnegative")

    columns = list(state_columns) if state_columns is not None else default_columns(p)
    trajectory = Trajectory(columns=["t", *columns, "kkt_residual", *(name for name, _ in extra_columns)])
    n_x = p.n_x

    def field(y: np.ndarray) -> np.ndarray:
        x_dot, z_dot = _projected_field(p, y[:n_x], y[n_x:])
        return np.concatenate([x_dot, z_dot])

    def project(y: np.ndarray) -> np.ndarray:
        y[:n_x] = np.maximum(y[:n_x], 0.0)
        return y

    def sample(t: float, y: np.ndarray, _dy: np.ndarray) -> None:
        state = LpState.unpack(y, n_x)
        residual = kkt_residual(p, state)
        trajectory.append(t, y, residual, *(fn(state) for _, fn in extra_columns))
        if observer is not None:
            observer(t, state, residual)

    flow = integrate_flow(
        field,
        s0.pack(),
        dt,
        t_final,
        project=project,
        observer=sample,
        sample_stride=sample_stride,
        max_norm=max_norm,
        stall_tol=stall_tol,
        stall_steps=stall_steps,
        max_steps=max_steps,
    )
    logger.info(f"Lp_run_finished t={flow.t_end:.6g} steps={flow.steps} residual={trajectory.rows[-1][len(columns) + 1]:.3g}")
    return LpRun(trajectory=trajectory, state=LpState.unpack(flow.y, n_x), t_end=flow.t_end, stalled=flow.stalled)


def integrate(
        p: LpProblem,
        s0: LpState,
        dt: float,
        t_final: float,
        observer: LpObserver | None = None,
        **options,
) -> Trajectory:
    return run(p, s0, dt, t_final, observer, **options).trajectory


def _orthogonal(rng: np.random.Generator, k: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))


def random_feasible_lp(rng: np.random.Generator, n_x: int, m: int) -> tuple[LpProblem, LpState]:
    """Random instance with a unique, nondegenerate and strictly complementary optimum.

    A random basis of m columns carries x* > 0 and zero reduced cost; every
    other column has x* = 0 and reduced cost (Aᵀz* + c)_k > 0. The basis
    block has singular values in [0.8, 1.5], so the saddle-point flow
    contracts at a rate bounded away from zero. Returns the problem and
    its optimal pair (x*, z*).
    """
    if not 1 <= m <= n_x:
        raise DomainValidationError(f"need 1 <= m <= n_x, got m={m} n_x={n_x}")

    basis = rng.permutation(n_x)[:m]
    off_basis = np.setdiff1d(np.arange(n_x), basis)

    A = rng.uniform(-1.0, 1.0, size=(m, n_x))
    singular = rng.uniform(0.8, 1.5, size=m)
    A[:, basis] = _orthogonal(rng, m) @ np.diag(singular) @ _orthogonal(rng, m).T

    x_star = np.zeros(n_x)
    x_star[basis] = rng.uniform(0.5, 1.5, size=m)
    z_star = rng.uniform(-1.0, 1.0, size=m)
    reduced = np.zeros(n_x)
    reduced[off_basis] = rng.uniform(0.5, 1.5, size=off_basis.size)

    problem = LpProblem(c=reduced - A.T @ z_star, A=A, b=A @ x_star)
    return problem, LpState(x=x_star, z=z_star)
