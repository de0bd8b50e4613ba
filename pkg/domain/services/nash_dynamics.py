"""Cascade of the stable and balancing dynamics.

Every agent runs its stable dynamics throughout; agent i balances α^b_i
against j only while i and j predict each other as partners from the
current matching states, and otherwise lets α^b_i decay.
"""
import logging

import numpy as np

from domain.core.constants import DEFAULT_MAX_NORM, DEFAULT_SAMPLE_STRIDE, SETTLEMENT_WINDOW, STALL_STEPS
from domain.core.errors import UnsettledMatchingError
from domain.schemas import DisturbanceSpec, Matching, NashRunResult, NashState, Outcome, Trajectory, WeightedGraph
from domain.services import stable_dynamics
from domain.services.balance_dynamics import error_vector
from domain.services.integrator import integrate_flow
from domain.services.locality import StateView
from utils.disturbances import make_disturbance

logger = logging.getLogger(__name__)


def predict_partner(g: WeightedGraph, m: np.ndarray, i: int) -> int | None:
    """The neighbor whose matching state is strictly closest to 1, if unique."""
    distances = {j: abs(m[g.edge_id(i, j)] - 1) for j in g.neighbors(i)}
    if not distances:
        return None
    best = min(distances.values())
    winners = [j for j, d in distances.items() if d == best]
    return winners[0] if len(winners) == 1 else None


def predictions(g: WeightedGraph, m: np.ndarray) -> np.ndarray:
    """Vectorized predict_partner for all agents, 0-based, −1 for none."""
    distances = np.abs(m[g.arc_edges] - 1)
    best = np.full(g.n, np.inf)
    np.minimum.at(best, g.arc_sources, distances)

    is_best = distances == best[g.arc_sources]
    counts = np.bincount(g.arc_sources[is_best], minlength=g.n)
    winner = np.full(g.n, -1, dtype=np.intp)
    winner[g.arc_sources[is_best]] = g.arc_targets[is_best]
    return np.where(counts == 1, winner, -1)


def mutual_partners(predicted: np.ndarray) -> np.ndarray:
    """Keep only predictions that are reciprocated."""
    safe = np.where(predicted >= 0, predicted, 0)
    mutual = (predicted >= 0) & (predicted[safe] == np.arange(predicted.size))
    return np.where(mutual, predicted, -1)


def mutual_pairs(g: WeightedGraph, m: np.ndarray) -> Matching:
    partner = mutual_partners(predictions(g, m))
    return Matching(pairs=[(i + 1, p + 1) for i, p in enumerate(partner) if p > i])


class PredictionDwell:
    """Holds each agent's prediction until a new one persisted for `steps` evaluations."""

    def __init__(self, n: int, steps: int):
        self.steps = steps
        self.committed = np.full(n, -1, dtype=np.intp)
        self.candidate = np.full(n, -1, dtype=np.intp)
        self.count = np.zeros(n, dtype=np.intp)

    def __call__(self, raw: np.ndarray) -> np.ndarray:
        if self.steps == 0:
            return raw
        same = raw == self.candidate
        self.count = np.where(same, self.count + 1, 1)
        self.candidate = raw.copy()
        switch = (raw != self.committed) & (self.count >= self.steps)
        self.committed = np.where(switch, raw, self.committed)
        return self.committed


def _balance_field(g: WeightedGraph, m: np.ndarray, alpha_b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    partner = mutual_partners(predictions(g, m))
    return -error_vector(g, partner, alpha_b), partner


def nash_rhs(g: WeightedGraph, st: NashState) -> NashState:
    stable = stable_dynamics.stable_rhs(g, st.stable)
    alpha_b_dot, _ = _balance_field(g, st.stable.m, st.alpha_b)
    return NashState(stable=stable, alpha_b=alpha_b_dot)


def agent_balance_derivative(view: StateView, i: int) -> float:
    """α̇^b_i from 2-hop information: partner predictions, then the matched error formula."""

    def predict(a: int) -> int | None:
        distances = {k: abs(view.matching_state(a, k) - 1) for k in view.neighbors(a)}
        if not distances:
            return None
        best = min(distances.values())
        winners = [k for k, d in distances.items() if d == best]
        return winners[0] if len(winners) == 1 else None

    alpha_i = view.alpha_b(i)
    j = predict(i)
    if j is None or predict(j) != i:
        return -alpha_i

    def beta(a: int, exclude: int) -> float:
        return max(
            (max(view.weight(a, k) - view.alpha_b(k), 0.0) for k in view.neighbors(a) if k != exclude),
            default=0.0,
        )

    return -(alpha_i - 0.5 * (view.weight(i, j) + beta(i, j) - beta(j, i)))


def state_columns(g: WeightedGraph) -> list[str]:
    return (stable_dynamics.state_columns(g)
            + [f"alpha_b_{i}" for i in g.vertices]
            + [f"pred_{i}" for i in g.vertices])


def run_nash(
        g: WeightedGraph,
        st0: NashState | None = None,
        dt: float = 1e-3,
        t_final: float = 100.0,
        disturbance: DisturbanceSpec | None = None,
        *,
        sample_stride: int = DEFAULT_SAMPLE_STRIDE,
        max_norm: float = DEFAULT_MAX_NORM,
        prediction_dwell: int = 0,
        stall_tol: float | None = None,
        stall_steps: int = STALL_STEPS,
) -> NashRunResult:
    """Integrate the cascade and report the settled pairing and its allocation.

    The settlement time is the first time from which the mutual pairing
    stays constant until the end of the run. A pairing that still changes
    within the last tenth of the horizon raises UnsettledMatchingError.
    """
    n, n_edges = g.n, g.n_edges
    if st0 is None:
        st0 = NashState.zeros(n, n_edges)
    stable_dynamics.check_state(g, st0.stable)
    noise = make_disturbance(disturbance)

    split = n + 2 * n_edges
    layout = {
        "alpha_s": slice(0, n),
        "s": slice(n, n + n_edges),
        "m": slice(n + n_edges, split),
        "alpha_b": slice(split, split + n),
    }
    dwell = PredictionDwell(n, prediction_dwell)
    trajectory = Trajectory(columns=["t", *state_columns(g)])
    tracker = {"pairing": None, "since": 0.0, "step": 0}

    def field(y: np.ndarray) -> np.ndarray:
        actual = y
        d_field = None
        if noise is not None:
            d_input, d_field = noise.draw(layout, y.size)
            y = y + d_input

        alpha, s, m, alpha_b = (y[layout[k]] for k in ("alpha_s", "s", "m", "alpha_b"))
        fa, fs, m_dot = stable_dynamics.unprojected_flows(g, alpha, s, m)
        fa = np.where(actual[layout["alpha_s"]] > 0, fa, np.maximum(fa, 0.0))
        fs = np.where(actual[layout["s"]] > 0, fs, np.maximum(fs, 0.0))

        predicted = dwell(predictions(g, actual[layout["m"]]))
        partner = mutual_partners(predicted)
        alpha_b_dot = -error_vector(g, partner, alpha_b)

        pairing = tuple(partner.tolist())
        if pairing != tracker["pairing"]:
            tracker["pairing"] = pairing
            tracker["since"] = tracker["step"] * dt
        tracker["predicted"] = predicted

        dy = np.concatenate([fa, fs, m_dot, alpha_b_dot])
        return dy if d_field is None else dy + d_field

    def project(y: np.ndarray) -> np.ndarray:
        y[:n + n_edges] = np.maximum(y[:n + n_edges], 0.0)
        tracker["step"] += 1
        return y

    def sample(t: float, y: np.ndarray, _dy: np.ndarray) -> None:
        trajectory.append(t, y, tracker["predicted"] + 1)

    flow = integrate_flow(
        field,
        st0.pack(),
        dt,
        t_final,
        project=project,
        observer=sample,
        sample_stride=sample_stride,
        max_norm=max_norm,
        stall_tol=None if noise is not None else stall_tol,
        stall_steps=stall_steps,
    )

    state = NashState.unpack(flow.y, n, n_edges)
    partner = np.asarray(tracker["pairing"], dtype=np.intp)
    settled_pairs = [(i + 1, p + 1) for i, p in enumerate(partner) if p > i]
    settlement_time = tracker["since"]
    settled = flow.stalled or settlement_time <= (1 - SETTLEMENT_WINDOW) * flow.t_end

    outcome = Outcome(matching=Matching(pairs=settled_pairs), alloc=state.alpha_b)
    result = NashRunResult(
        trajectory=trajectory,
        state=state,
        t_end=flow.t_end,
        outcome=outcome if settled else None,
        settlement_time=settlement_time if settled else None,
    )

    if not settled:
        logger.warning(f"Nash_run_unsettled t={flow.t_end:.6g} last_change={settlement_time:.6g}")
        raise UnsettledMatchingError("matching never settled", result=result)

    logger.info(f"Nash_run_finished t={flow.t_end:.6g} settled_at={settlement_time:.6g} pairs={settled_pairs}")
    return result
