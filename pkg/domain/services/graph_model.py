from collections.abc import Sequence

from domain.core.constants import EXACT_TOL
from domain.core.errors import ALLOC_LENGTH_MISMATCH, DomainValidationError, UNKNOWN_EDGE
from domain.schemas import Matching, Outcome, WeightedGraph
from utils.numerics import positive_part


def _check_alloc(g: WeightedGraph, alloc: Sequence[float]) -> None:
    if len(alloc) != g.n:
        raise DomainValidationError(f"{ALLOC_LENGTH_MISMATCH}: {len(alloc)} != {g.n}")


def validate_matching(g: WeightedGraph, matching: Matching) -> None:
    for i, j in matching.pairs:
        if not g.has_edge(i, j):
            raise DomainValidationError(f"{UNKNOWN_EDGE}: ({i}, {j})")


def is_valid_outcome(g: WeightedGraph, o: Outcome, tol: float = EXACT_TOL) -> bool:
    _check_alloc(g, o.alloc)
    validate_matching(g, o.matching)

    for i, j in o.matching.pairs:
        if abs(o.alloc[i - 1] + o.alloc[j - 1] - g.weight(i, j)) > tol:
            return False
    return all(
        abs(o.alloc[k - 1]) <= tol
        for k in g.vertices
        if o.matching.partner(k) is None
    )


def stability_residual(g: WeightedGraph, alloc: Sequence[float]) -> float:
    """Largest violation of α ≥ 0 and α_i + α_j ≥ w_ij over all agents and edges."""
    _check_alloc(g, alloc)
    worst = max((-a for a in alloc), default=0.0)
    for (i, j), w in g.weights.items():
        worst = max(worst, w - alloc[i - 1] - alloc[j - 1])
    return max(worst, 0.0)


def is_stable(g: WeightedGraph, o: Outcome, tol: float = EXACT_TOL) -> bool:
    return stability_residual(g, o.alloc) <= tol


def best_alternative(g: WeightedGraph, alloc: Sequence[float], i: int, exclude: int | None = None) -> float:
    """β_{i\\j}: the most i could get from a neighbor other than `exclude`."""
    return max(
        (positive_part(g.weight(i, k) - alloc[k - 1]) for k in g.neighbors(i) if k != exclude),
        default=0.0,
    )


def next_best_set(g: WeightedGraph, alloc: Sequence[float], i: int, exclude: int | None = None) -> frozenset[int]:
    """η_{i\\j}: neighbors realizing β_{i\\j}; empty when no outside option gains anything."""
    gains = {k: g.weight(i, k) - alloc[k - 1] for k in g.neighbors(i) if k != exclude}
    if not gains:
        return frozenset()
    best = max(gains.values())
    if best <= 0:
        return frozenset()
    return frozenset(k for k, gain in gains.items() if gain == best)


def balance_gaps(g: WeightedGraph, o: Outcome) -> dict[tuple[int, int], float]:
    """Per matched pair, the difference between the two partners' benefits over their outside options."""
    _check_alloc(g, o.alloc)
    gaps = {}
    for i, j in o.matching.sorted_pairs():
        benefit_i = o.alloc[i - 1] - best_alternative(g, o.alloc, i, j)
        benefit_j = o.alloc[j - 1] - best_alternative(g, o.alloc, j, i)
        gaps[(i, j)] = benefit_i - benefit_j
    return gaps


def balance_residual(g: WeightedGraph, o: Outcome) -> float:
    return max((abs(gap) for gap in balance_gaps(g, o).values()), default=0.0)


def is_balanced(g: WeightedGraph, o: Outcome, tol: float = EXACT_TOL) -> bool:
    return balance_residual(g, o) <= tol


def is_nash(g: WeightedGraph, o: Outcome, tol: float = EXACT_TOL) -> bool:
    return is_stable(g, o, tol) and is_balanced(g, o, tol)
