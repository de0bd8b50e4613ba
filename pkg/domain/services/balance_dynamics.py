"""Balancing dynamics α̇ = −e(α) for a fixed matching."""
import logging
from collections.abc import Sequence

import numpy as np

from domain.core.constants import DEFAULT_MAX_NORM, DEFAULT_SAMPLE_STRIDE
from domain.schemas import BalanceErrors, BalanceState, BalancedRunResult, Matching, Outcome, Trajectory, WeightedGraph
from domain.services import graph_model
from domain.services.integrator import integrate_flow
from domain.services.locality import StateView
from utils.numerics import sup_norm

logger = logging.getLogger(__name__)


def partner_array(g: WeightedGraph, matching: Matching) -> np.ndarray:
    """0-based partner per agent, −1 when unmatched."""
    graph_model.validate_matching(g, matching)
    partner = np.full(g.n, -1, dtype=np.intp)
    for i, j in matching.pairs:
        partner[i - 1] = j - 1
        partner[j - 1] = i - 1
    return partner


def best_alternatives(g: WeightedGraph, partner: np.ndarray, alloc: np.ndarray) -> np.ndarray:
    """β_{i\\p(i)} for every agent, excluding the current partner p(i)."""
    gains = g.arc_weights - alloc[g.arc_targets]
    gains[g.arc_targets == partner[g.arc_sources]] = 0.0
    beta = np.zeros(g.n)
    np.maximum.at(beta, g.arc_sources, np.maximum(gains, 0.0))
    return beta


def error_vector(g: WeightedGraph, partner: np.ndarray, alloc: np.ndarray) -> np.ndarray:
    matched = partner >= 0
    if not matched.any():
        return alloc.copy()

    beta = best_alternatives(g, partner, alloc)
    safe = np.where(matched, partner, 0)
    target = 0.5 * (g.weight_matrix[np.arange(g.n), safe] + beta - beta[safe])
    return np.where(matched, alloc - target, alloc)


def balancing_error(g: WeightedGraph, matching: Matching, alloc: Sequence[float]) -> BalanceErrors:
    graph_model._check_alloc(g, alloc)
    return BalanceErrors(e=error_vector(g, partner_array(g, matching), np.asarray(alloc, dtype=float)))


def balance_rhs(g: WeightedGraph, matching: Matching, alloc: Sequence[float]) -> np.ndarray:
    return -balancing_error(g, matching, alloc).e


def lyapunov_value(e: np.ndarray) -> float:
    """V = ½ max_i e_i², non-increasing along the balancing dynamics."""
    return 0.5 * float(np.max(e ** 2, initial=0.0))


def agent_derivative(view: StateView, matching: Matching, i: int) -> float:
    """α̇^b_i computed from the 2-hop information agent i can gather."""
    j = matching.partner(i)
    alpha_i = view.alpha_b(i)
    if j is None:
        return -alpha_i

    def beta(a: int, exclude: int) -> float:
        return max(
            (max(view.weight(a, k) - view.alpha_b(k), 0.0) for k in view.neighbors(a) if k != exclude),
            default=0.0,
        )

    return -(alpha_i - 0.5 * (view.weight(i, j) + beta(i, j) - beta(j, i)))


def _pair_sums(g: WeightedGraph, pairs: list[tuple[int, int]], alloc: np.ndarray) -> list[float]:
    return [alloc[i - 1] + alloc[j - 1] for i, j in pairs]


def run_balanced(
        g: WeightedGraph,
        matching: Matching,
        alpha0: Sequence[float] | None = None,
        dt: float = 1e-3,
        t_final: float = 30.0,
        *,
        sample_stride: int = DEFAULT_SAMPLE_STRIDE,
        max_norm: float = DEFAULT_MAX_NORM,
) -> BalancedRunResult:
    """Integrate the (continuous) balancing dynamics from `alpha0` (default 0).

    The trajectory records α^b, V = ½ max e² and α_i + α_j per matched pair.
    """
    partner = partner_array(g, matching)
    y0 = np.zeros(g.n) if alpha0 is None else np.array(alpha0, dtype=float)
    graph_model._check_alloc(g, y0)

    pairs = matching.sorted_pairs()
    trajectory = Trajectory(
        columns=["t", *(f"alpha_b_{i}" for i in g.vertices), "V", *(f"pair_{i}_{j}" for i, j in pairs)]
    )

    def field(y: np.ndarray) -> np.ndarray:
        return -error_vector(g, partner, y)

    def sample(t: float, y: np.ndarray, dy: np.ndarray) -> None:
        trajectory.append(t, y, lyapunov_value(-dy), _pair_sums(g, pairs, y))

    flow = integrate_flow(field, y0, dt, t_final, observer=sample, sample_stride=sample_stride, max_norm=max_norm)

    alloc = flow.y
    max_error = sup_norm(error_vector(g, partner, alloc))
    logger.info(f"Balanced_run_finished t={flow.t_end:.6g} max_error={max_error:.3g}")
    return BalancedRunResult(
        trajectory=trajectory,
        state=BalanceState(alpha_b=alloc),
        outcome=Outcome(matching=matching, alloc=alloc),
        t_end=flow.t_end,
        max_error=max_error,
    )
