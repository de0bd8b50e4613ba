"""Distributed dynamics for stable outcomes.

The LP dynamics run on the slack form of the matching dual

    min Σ α_i  s.t.  s_ij − α_i − α_j = −w_ij,  α ≥ 0,  s ≥ 0,

with one multiplier m_ij per edge. Written per agent:

    f^α_i  = −1 − Σ_{j∈N(i)} [α_i + α_j − s_ij − w_ij − m_ij]
    f^s_ij = α_i + α_j − s_ij − w_ij − m_ij
    ṁ_ij   = w_ij + s_ij − α_i − α_j

At equilibrium m solves the LP relaxation of the maximum weight
matching, so matched edges settle at m_ij = 1.
"""
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator

from domain.core.constants import (DEFAULT_MAX_NORM, DEFAULT_SAMPLE_STRIDE, DEFAULT_THRESHOLD, STALL_STEPS,
                                   STALL_TOL)
from domain.core.errors import DomainValidationError, InvariantViolationError, UndecidedMatchingError
from domain.schemas import LpProblem, LpState, Matching, StableRunResult, StableState, WeightedGraph
from domain.services import graph_model, lp_dynamics
from domain.services.locality import StateView

logger = logging.getLogger(__name__)


def _edge_residual(g: WeightedGraph, alpha: np.ndarray, s: np.ndarray) -> np.ndarray:
    """α_i + α_j − s_ij − w_ij per edge."""
    return alpha[g.tails] + alpha[g.heads] - s - g.weight_vector


def _vertex_sum(g: WeightedGraph, per_edge: np.ndarray) -> np.ndarray:
    return (np.bincount(g.tails, weights=per_edge, minlength=g.n)
            + np.bincount(g.heads, weights=per_edge, minlength=g.n))


def unprojected_flows(g: WeightedGraph, alpha: np.ndarray, s: np.ndarray, m: np.ndarray):
    """(f^α, f^s, ṁ) for the whole network before projection."""
    r = _edge_residual(g, alpha, s) - m
    return -1.0 - _vertex_sum(g, r), r, -(r + m)


def check_state(g: WeightedGraph, st: StableState) -> None:
    if st.alpha_s.shape != (g.n,) or st.s.shape != (g.n_edges,) or st.m.shape != (g.n_edges,):
        raise DomainValidationError("stable state does not match the graph dimensions")
    if np.any(st.alpha_s < 0) or np.any(st.s < 0):
        raise InvariantViolationError("alpha_s and s must stay nonnegative")


def f_alpha(g: WeightedGraph, st: StableState, i: int) -> float:
    total = 0.0
    for j in g.neighbors(i):
        k = g.edge_id(i, j)
        total += st.alpha_s[i - 1] + st.alpha_s[j - 1] - st.s[k] - g.weight(i, j) - st.m[k]
    return -1.0 - total


def f_s(g: WeightedGraph, st: StableState, edge: tuple[int, int]) -> float:
    i, j = edge
    k = g.edge_id(i, j)
    return st.alpha_s[i - 1] + st.alpha_s[j - 1] - st.s[k] - g.weight(i, j) - st.m[k]


def stable_rhs(g: WeightedGraph, st: StableState) -> StableState:
    """Time derivative of the stable dynamics, returned in StableState layout."""
    check_state(g, st)
    fa, fs, m_dot = unprojected_flows(g, st.alpha_s, st.s, st.m)
    return StableState(
        alpha_s=np.where(st.alpha_s > 0, fa, np.maximum(fa, 0.0)),
        s=np.where(st.s > 0, fs, np.maximum(fs, 0.0)),
        m=m_dot,
    )


def agent_derivative(view: StateView, i: int) -> dict:
    """Derivative of the states owned by agent i, reading only through `view`.

    Agent i owns α^s_i and s_ij, m_ij for neighbors j > i.
    """
    total = 0.0
    owned_s: dict[int, float] = {}
    owned_m: dict[int, float] = {}
    alpha_i = view.alpha_s(i)

    for j in view.neighbors(i):
        r = alpha_i + view.alpha_s(j) - view.slack(i, j) - view.weight(i, j)
        total += r - view.matching_state(i, j)
        if j > i:
            s_ij = view.slack(i, j)
            fs = r - view.matching_state(i, j)
            owned_s[j] = fs if s_ij > 0 else max(fs, 0.0)
            owned_m[j] = -r

    fa = -1.0 - total
    return {
        "alpha_s": fa if alpha_i > 0 else max(fa, 0.0),
        "s": owned_s,
        "m": owned_m,
    }


def _incidence_operator(g: WeightedGraph) -> LinearOperator:
    n, n_edges = g.n, g.n_edges

    def matvec(x: np.ndarray) -> np.ndarray:
        x = np.ravel(x)
        alpha, s = x[:n], x[n:]
        return s - alpha[g.tails] - alpha[g.heads]

    def rmatvec(y: np.ndarray) -> np.ndarray:
        y = np.ravel(y)
        return np.concatenate([-_vertex_sum(g, y), y])

    return LinearOperator((n_edges, n + n_edges), matvec=matvec, rmatvec=rmatvec, dtype=float)


def assemble_lp(g: WeightedGraph, dense: bool = False) -> LpProblem:
    """Slack-form LP whose LP dynamics coincide with the stable dynamics (z = m)."""
    n, n_edges = g.n, g.n_edges
    c = np.concatenate([np.ones(n), np.zeros(n_edges)])
    b = -g.weight_vector

    if not dense:
        return LpProblem(c=c, A=_incidence_operator(g), b=b)

    A = np.zeros((n_edges, n + n_edges))
    rows = np.arange(n_edges)
    A[rows, g.tails] = -1.0
    A[rows, g.heads] = -1.0
    A[rows, n + rows] = 1.0
    return LpProblem(c=c, A=A, b=b)


def to_lp_state(st: StableState) -> LpState:
    return LpState(x=np.concatenate([st.alpha_s, st.s]), z=st.m)


def from_lp_state(g: WeightedGraph, s: LpState) -> StableState:
    return StableState(alpha_s=s.x[:g.n], s=s.x[g.n:], m=s.z)


def extract_matching(g: WeightedGraph, st: StableState, threshold: float = DEFAULT_THRESHOLD) -> Matching | None:
    """Edges whose matching state is within `threshold` of 1.

    Returns None (undecided) when the chosen edges overlap or when some
    edge state is within `threshold` of neither 0 nor 1.
    """
    if not 0 < threshold < 0.5:
        raise DomainValidationError(f"threshold must lie in (0, 0.5), got {threshold}")

    if any(min(abs(m), abs(m - 1)) >= threshold for m in st.m):
        return None
    chosen = [edge for edge, m in zip(g.edges, st.m) if abs(m - 1) < threshold]
    endpoints = [v for edge in chosen for v in edge]
    if len(endpoints) != len(set(endpoints)):
        return None
    return Matching(pairs=chosen)


def state_columns(g: WeightedGraph) -> list[str]:
    return ([f"alpha_s_{i}" for i in g.vertices]
            + [f"s_{i}_{j}" for i, j in g.edges]
            + [f"m_{i}_{j}" for i, j in g.edges])


def run_stable(
        g: WeightedGraph,
        s0: StableState | None = None,
        dt: float = 1e-3,
        t_final: float = 100.0,
        *,
        threshold: float = DEFAULT_THRESHOLD,
        sample_stride: int = DEFAULT_SAMPLE_STRIDE,
        max_norm: float = DEFAULT_MAX_NORM,
        stall_tol: float | None = STALL_TOL,
        stall_steps: int = STALL_STEPS,
) -> StableRunResult:
    """Integrate the stable dynamics and read off (M, α^s).

    Raises UndecidedMatchingError (carrying the result) when the matching
    states do not single out a matching at the end of the horizon.
    """
    if s0 is None:
        s0 = StableState.zeros(g.n, g.n_edges)
    check_state(g, s0)

    problem = assemble_lp(g)
    lp_run = lp_dynamics.run(
        problem,
        to_lp_state(s0),
        dt,
        t_final,
        state_columns=state_columns(g),
        extra_columns=[("stab_residual", lambda s: graph_model.stability_residual(g, s.x[:g.n]))],
        sample_stride=sample_stride,
        max_norm=max_norm,
        stall_tol=stall_tol,
        stall_steps=stall_steps,
    )

    state = from_lp_state(g, lp_run.state)
    matching = extract_matching(g, state, threshold)
    result = StableRunResult(
        trajectory=lp_run.trajectory,
        state=state,
        t_end=lp_run.t_end,
        matching=matching,
        alloc=tuple(state.alpha_s.tolist()),
        kkt_residual=lp_dynamics.kkt_residual(problem, lp_run.state),
        stability_residual=graph_model.stability_residual(g, state.alpha_s),
    )

    if matching is None:
        logger.warning(f"Stable_run_undecided t={lp_run.t_end:.6g}")
        raise UndecidedMatchingError("no integral solution (fractional LP optimum)", result=result)

    logger.info(
        f"Stable_run_finished t={lp_run.t_end:.6g} pairs={matching.sorted_pairs()} "
        f"kkt={result.kkt_residual:.3g} stab={result.stability_residual:.3g}"
    )
    return result
