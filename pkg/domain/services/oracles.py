"""Brute-force ground truth for small bargaining instances.

Everything here works in exact rational arithmetic and shares no code with
the dynamics modules. Float weights enter through their shortest decimal
representation, so a weight read as `1.2` is the rational 6/5.
"""
import itertools
import logging
from collections.abc import Iterator, Sequence
from fractions import Fraction

import networkx as nx

from domain.core.constants import BALANCED_EDGE_LIMIT, MATCHING_EDGE_LIMIT, RELAXATION_EDGE_LIMIT
from domain.core.errors import OracleAssertionError, SizeGuardError
from domain.schemas import Edge, Matching, Outcome, WeightedGraph

logger = logging.getLogger(__name__)

ExactAlloc = tuple[Fraction, ...]
HALF = Fraction(1, 2)


def exact(value: float | int | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(repr(value)) if isinstance(value, float) else Fraction(value)


def _exact_weights(g: WeightedGraph) -> dict[Edge, Fraction]:
    return {edge: exact(w) for edge, w in g.weights.items()}


def _guard(g: WeightedGraph, limit: int, what: str) -> None:
    if g.n_edges > limit:
        raise SizeGuardError(f"{what} is limited to {limit} edges, graph has {g.n_edges}")


def _solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan elimination on a square system; None when singular."""
    size = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][size] for r in range(size)]


def enumerate_matchings(g: WeightedGraph) -> list[Matching]:
    """All matchings of g, the empty one included."""
    _guard(g, MATCHING_EDGE_LIMIT, "matching enumeration")
    edges = g.edges
    found: list[Matching] = []

    def extend(k: int, chosen: list[Edge], used: set[int]) -> None:
        if k == len(edges):
            found.append(Matching(pairs=chosen))
            return
        extend(k + 1, chosen, used)
        i, j = edges[k]
        if i not in used and j not in used:
            extend(k + 1, chosen + [(i, j)], used | {i, j})

    extend(0, [], set())
    return found


def max_weight_matchings(g: WeightedGraph) -> tuple[list[Matching], Fraction]:
    """Every matching of maximum total weight, and that weight."""
    weights = _exact_weights(g)
    scored = [(sum((weights[e] for e in m.pairs), Fraction(0)), m) for m in enumerate_matchings(g)]
    best = max(score for score, _ in scored)
    return [m for score, m in scored if score == best], best


def max_weight_matching(g: WeightedGraph) -> tuple[Matching, Fraction, bool]:
    """(M, weight, unique). Among tied maximizers the one listed first is returned."""
    maximizers, best = max_weight_matchings(g)
    return maximizers[0], best, len(maximizers) == 1


def lp_relaxation_maximizers(g: WeightedGraph) -> tuple[Fraction, list[tuple[Fraction, ...]]]:
    """Optimum of the matching LP relaxation and every half-integral point attaining it.

    Every vertex of the relaxation polytope is half-integral, so the optimal
    face is a single point exactly when one maximizer is returned.
    """
    _guard(g, RELAXATION_EDGE_LIMIT, "relaxation enumeration")
    edges = g.edges
    weights = _exact_weights(g)
    levels = (Fraction(0), HALF, Fraction(1))
    load = {v: Fraction(0) for v in g.vertices}
    current: list[Fraction] = []
    best: dict = {"value": None, "points": []}

    def record(value: Fraction) -> None:
        if best["value"] is None or value > best["value"]:
            best.update(value=value, points=[tuple(current)])
        elif value == best["value"]:
            best["points"].append(tuple(current))

    def extend(k: int, value: Fraction) -> None:
        if k == len(edges):
            record(value)
            return
        i, j = edges[k]
        for level in levels:
            if load[i] + level > 1 or load[j] + level > 1:
                break
            load[i] += level
            load[j] += level
            current.append(level)
            extend(k + 1, value + level * weights[edges[k]])
            current.pop()
            load[i] -= level
            load[j] -= level

    extend(0, Fraction(0))
    return best["value"], best["points"]


def lp_relaxation_optimum(g: WeightedGraph) -> tuple[Fraction, tuple[Fraction, ...], bool]:
    """(value, witness m, integral) where `integral` says that some maximizer lies in {0, 1}^E.

    An integral maximizer is preferred as the witness.
    """
    value, points = lp_relaxation_maximizers(g)
    integral = [m for m in points if all(level.denominator == 1 for level in m)]
    return value, (integral or points)[0], bool(integral)


def relaxation_optimum_unique(g: WeightedGraph) -> bool:
    _, points = lp_relaxation_maximizers(g)
    return len(points) == 1


def _pair_variables(g: WeightedGraph, matching: Matching) -> dict[int, tuple[list[Fraction], Fraction]]:
    """α_v as an affine function of one free share t_p per matched pair.

    For pair p = (i, j): α_i = t_p, α_j = w_ij − t_p; unmatched agents get 0.
    """
    weights = _exact_weights(g)
    pairs = matching.sorted_pairs()
    size = len(pairs)
    affine = {v: ([Fraction(0)] * size, Fraction(0)) for v in g.vertices}
    for p, (i, j) in enumerate(pairs):
        unit = [Fraction(0)] * size
        unit[p] = Fraction(1)
        affine[i] = (unit, Fraction(0))
        affine[j] = ([-u for u in unit], weights[(i, j)])
    return affine


def stable_allocation_exact(g: WeightedGraph, matching: Matching) -> ExactAlloc | None:
    """A stable allocation supported on `matching`, or None when there is none.

    Matched pairs split their weight exactly, so only one share per pair is
    free and every feasible point has the same total. The search runs over
    vertices of the feasible polytope, picking active constraint sets.
    """
    _guard(g, RELAXATION_EDGE_LIMIT, "stable allocation search")
    weights = _exact_weights(g)
    affine = _pair_variables(g, matching)
    size = len(matching)

    # every constraint reads coefs · t + const ≥ 0
    constraints: list[tuple[list[Fraction], Fraction]] = []
    for v in g.vertices:
        if matching.partner(v) is not None:
            constraints.append(affine[v])
    for (i, j), w in weights.items():
        ci, bi = affine[i]
        cj, bj = affine[j]
        constraints.append(([a + b for a, b in zip(ci, cj)], bi + bj - w))

    def feasible(t: list[Fraction]) -> bool:
        return all(sum(a * x for a, x in zip(coefs, t)) + const >= 0 for coefs, const in constraints)

    for active in itertools.combinations(constraints, size):
        t = _solve([coefs for coefs, _ in active], [-const for _, const in active])
        if t is None or not feasible(t):
            continue
        return tuple(sum((a * x for a, x in zip(coefs, t)), const) for coefs, const in
                     (affine[v] for v in g.vertices))
    return None


def stable_allocation(g: WeightedGraph, matching: Matching) -> tuple[float, ...] | None:
    alloc = stable_allocation_exact(g, matching)
    return None if alloc is None else tuple(float(a) for a in alloc)


def _gain(weights: dict[Edge, Fraction], alloc: dict[int, Fraction], i: int, k: int) -> Fraction:
    return weights[(min(i, k), max(i, k))] - alloc[k]


def _assignment_consistent(
        g: WeightedGraph,
        weights: dict[Edge, Fraction],
        alloc: dict[int, Fraction],
        i: int,
        exclude: int,
        assigned: int | None,
) -> bool:
    gains = [_gain(weights, alloc, i, k) for k in g.neighbors(i) if k != exclude]
    best = max(gains, default=Fraction(0))
    if assigned is None:
        return best <= 0
    chosen = _gain(weights, alloc, i, assigned)
    return chosen > 0 and chosen == best


def balanced_allocations_exact(g: WeightedGraph, matching: Matching) -> list[ExactAlloc]:
    """Every allocation on `matching` with zero balancing error.

    Each matched agent's next-best neighbor (or none) is guessed, which
    turns the balance conditions into a linear system; a solution is kept
    only when the guesses agree with it. Guesses leading to a singular
    system are skipped.
    """
    _guard(g, BALANCED_EDGE_LIMIT, "balanced allocation search")
    weights = _exact_weights(g)
    pairs = matching.sorted_pairs()
    matched = [v for pair in pairs for v in pair]
    column = {v: k for k, v in enumerate(matched)}
    options = [
        [None, *(k for k in g.neighbors(v) if k != matching.partner(v))]
        for v in matched
    ]

    found: list[ExactAlloc] = []
    for guess in itertools.product(*options):
        assigned = dict(zip(matched, guess))
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []

        for i, j in pairs:
            total = [Fraction(0)] * len(matched)
            total[column[i]] = total[column[j]] = Fraction(1)
            rows.append(total)
            rhs.append(weights[(i, j)])

            # α_i − β_i = α_j − β_j with β_v = w_vk − α_k for the guessed k
            diff = [Fraction(0)] * len(matched)
            diff[column[i]] += 1
            diff[column[j]] -= 1
            const = Fraction(0)
            for v, sign in ((i, 1), (j, -1)):
                k = assigned[v]
                if k is None:
                    continue
                const -= sign * weights[(min(v, k), max(v, k))]
                if k in column:
                    diff[column[k]] += sign
            rows.append(diff)
            rhs.append(-const)

        solution = _solve(rows, rhs)
        if solution is None:
            continue
        alloc = {v: Fraction(0) for v in g.vertices}
        alloc.update({v: solution[column[v]] for v in matched})
        if all(_assignment_consistent(g, weights, alloc, v, matching.partner(v), assigned[v]) for v in matched):
            candidate = tuple(alloc[v] for v in g.vertices)
            if candidate not in found:
                found.append(candidate)

    if not found:
        logger.debug(f"Balanced_allocations_none pairs={pairs}")
    return found


def balanced_allocations(g: WeightedGraph, matching: Matching) -> list[tuple[float, ...]]:
    return [tuple(float(a) for a in alloc) for alloc in balanced_allocations_exact(g, matching)]


def _is_stable_exact(g: WeightedGraph, alloc: ExactAlloc) -> bool:
    if any(a < 0 for a in alloc):
        return False
    return all(alloc[i - 1] + alloc[j - 1] >= w for (i, j), w in _exact_weights(g).items())


def stable_outcome_exists(g: WeightedGraph) -> bool:
    matching, _, _ = max_weight_matching(g)
    return stable_allocation_exact(g, matching) is not None


def nash_oracle(g: WeightedGraph) -> list[Outcome]:
    """All Nash outcomes supported on a maximum weight matching.

    Raises OracleAssertionError if g admits a stable outcome but some
    balanced allocation on a maximum weight matching is unstable.
    """
    maximizers, _ = max_weight_matchings(g)
    has_stable = stable_allocation_exact(g, maximizers[0]) is not None

    outcomes = []
    for matching in maximizers:
        for alloc in balanced_allocations_exact(g, matching):
            if _is_stable_exact(g, alloc):
                outcomes.append(Outcome(matching=matching, alloc=tuple(float(a) for a in alloc)))
            elif has_stable:
                raise OracleAssertionError(
                    f"balanced allocation {[str(a) for a in alloc]} on {matching.sorted_pairs()} is not stable"
                )
    return outcomes


def dense_lp_optimum(
        c: Sequence[Fraction],
        a_ub: Sequence[Sequence[Fraction]],
        b_ub: Sequence[Fraction],
) -> tuple[Fraction, tuple[Fraction, ...]] | None:
    """max c·x s.t. A x ≤ b, x ≥ 0 by exhaustive basis enumeration.

    Assumes a bounded feasible region; returns None when it is empty.
    """
    n_x = len(c)
    constraints = [(list(row), b) for row, b in zip(a_ub, b_ub)]
    for k in range(n_x):
        unit = [Fraction(0)] * n_x
        unit[k] = Fraction(-1)
        constraints.append((unit, Fraction(0)))

    best = None
    for active in itertools.combinations(constraints, n_x):
        x = _solve([row for row, _ in active], [b for _, b in active])
        if x is None:
            continue
        if any(sum(a * v for a, v in zip(row, x)) > b for row, b in constraints):
            continue
        value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
        if best is None or value > best[0]:
            best = (value, tuple(x))
    return best


def relaxation_as_dense_lp(g: WeightedGraph) -> tuple[list[Fraction], list[list[Fraction]], list[Fraction]]:
    """(c, A, b) of the matching relaxation: one row per agent, Σ_j m_ij ≤ 1."""
    weights = _exact_weights(g)
    c = [weights[e] for e in g.edges]
    rows = [[Fraction(1) if v in edge else Fraction(0) for edge in g.edges] for v in g.vertices]
    return c, rows, [Fraction(1)] * g.n


def _to_networkx(g: WeightedGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    graph.add_weighted_edges_from((i, j, w) for (i, j), w in g.weights.items())
    return graph


def small_graph_family(
        max_vertices: int,
        weights: Sequence[float] = (1, 2, 3),
        connected: bool = True,
        min_vertices: int = 2,
) -> Iterator[WeightedGraph]:
    """Every weighted graph on min_vertices..max_vertices agents, up to isomorphism.

    Structures come from the networkx graph atlas; each structure gets every
    weight assignment from `weights`, and weighted-isomorphic copies are
    dropped.
    """
    if max_vertices > 7:
        raise SizeGuardError("the graph atlas covers at most 7 vertices")

    for shape in nx.graph_atlas_g():
        order = shape.number_of_nodes()
        if order < min_vertices or order > max_vertices or shape.number_of_edges() == 0:
            continue
        if connected and not nx.is_connected(shape):
            continue

        edges = [(i + 1, j + 1) for i, j in shape.edges()]
        buckets: dict[str, list[nx.Graph]] = {}
        for assignment in itertools.product(weights, repeat=len(edges)):
            g = WeightedGraph(n=order, weights=[(i, j, float(w)) for (i, j), w in zip(edges, assignment)])
            candidate = _to_networkx(g)
            key = nx.weisfeiler_lehman_graph_hash(candidate, edge_attr="weight")
            seen = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(candidate, other, edge_match=lambda a, b: a["weight"] == b["weight"])
                   for other in seen):
                continue
            seen.append(candidate)
            yield g
