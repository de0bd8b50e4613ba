from fractions import Fraction

import pytest
from scipy.optimize import linprog

from domain import schemas, services
from domain.core.errors import SizeGuardError
from domain.services import oracles
from tests.factories.graphs import make_four_cycle, make_graph, make_single_edge, make_tied_relaxation_graph, make_triangle


def make_complete_graph(n: int):
    return make_graph(n=n, weights=[(i, j, 1.0) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


@pytest.mark.parametrize(
    "graph, expected",
    [
        (make_single_edge(), 2),
        (make_graph(), 3),
        (make_triangle(), 4),
        (make_four_cycle(), 7),
    ]
)
def test_enumerate_matchings__small_graphs__counts(graph, expected):
    matchings = services.enumerate_matchings(graph)

    assert len(matchings) == expected
    assert schemas.Matching() in matchings


def test_exact__float__shortest_decimal():
    assert oracles.exact(1.2) == Fraction(6, 5)
    assert oracles.exact(3) == Fraction(3)


@pytest.mark.parametrize(
    "graph, pairs, weight, unique",
    [
        (make_graph(), [(1, 2)], Fraction(6, 5), True),
        (make_four_cycle(), [(1, 2), (3, 4)], Fraction(4), True),
        (make_triangle(), None, Fraction(1), False),
    ]
)
def test_max_weight_matching__examples__expected(graph, pairs, weight, unique):
    matching, best, is_unique = services.max_weight_matching(graph)

    assert best == weight
    assert is_unique is unique
    if pairs is not None:
        assert matching == schemas.Matching(pairs=pairs)


@pytest.mark.parametrize(
    "graph, value, integral",
    [
        (make_triangle(), Fraction(3, 2), False),
        (make_graph(), Fraction(6, 5), True),
        (make_four_cycle(), Fraction(4), True),
        (make_triangle(3.0, 1.0, 1.0), Fraction(3), True),
    ]
)
def test_lp_relaxation_optimum__examples__value_and_integrality(graph, value, integral):
    best, witness, is_integral = services.lp_relaxation_optimum(graph)

    assert best == value
    assert is_integral is integral
    assert len(witness) == graph.n_edges


@pytest.mark.parametrize("graph", [make_triangle(), make_graph(), make_four_cycle(), make_triangle(1.0, 2.0, 2.0)])
def test_lp_relaxation_optimum__cross_checked_against_dense_solvers(graph):
    c, rows, rhs = oracles.relaxation_as_dense_lp(graph)
    value, _, _ = services.lp_relaxation_optimum(graph)

    dense_value, _ = oracles.dense_lp_optimum(c, rows, rhs)
    solver = linprog([-float(w) for w in c], A_ub=[[float(a) for a in row] for row in rows],
                     b_ub=[float(b) for b in rhs], bounds=(0, None), method="highs")

    assert dense_value == value
    assert -solver.fun == pytest.approx(float(value))


def test_lp_relaxation_maximizers__triangle__single_half_point(triangle):
    value, points = services.lp_relaxation_maximizers(triangle)

    assert value == Fraction(3, 2)
    assert points == [(oracles.HALF, oracles.HALF, oracles.HALF)]


@pytest.mark.parametrize(
    "graph, expected",
    [
        (make_single_edge(), True),
        (make_triangle(), True),
        (make_graph(), True),
        (make_graph(weights=[(1, 2, 1.0), (2, 3, 1.0)]), False),
        (make_tied_relaxation_graph(), False),
    ]
)
def test_relaxation_optimum_unique__examples__expected(graph, expected):
    assert services.relaxation_optimum_unique(graph) is expected


def test_lp_relaxation_maximizers__tied_relaxation__integral_and_fractional_optima():
    g = make_tied_relaxation_graph()

    value, points = services.lp_relaxation_maximizers(g)
    mwm, weight, unique = services.max_weight_matching(g)

    assert value == weight == 6
    assert unique and mwm == schemas.Matching(pairs=[(1, 3), (4, 5)])
    assert services.stable_outcome_exists(g)
    assert len(points) >= 2
    assert any(any(level == oracles.HALF for level in point) for point in points)


def test_dense_lp_optimum__infeasible__none():
    assert oracles.dense_lp_optimum([Fraction(1)], [[Fraction(1)]], [Fraction(-1)]) is None


def test_stable_allocation__path__stable_and_valid(path_graph):
    matching = schemas.Matching(pairs=[(1, 2)])

    alloc = services.stable_allocation(path_graph, matching)
    outcome = schemas.Outcome(matching=matching, alloc=alloc)

    assert services.is_valid_outcome(path_graph, outcome)
    assert services.is_stable(path_graph, outcome)


def test_stable_allocation__triangle__none(triangle):
    assert services.stable_allocation(triangle, schemas.Matching(pairs=[(1, 2)])) is None


def test_stable_allocation__non_maximum_matching__none(path_graph):
    assert services.stable_allocation(path_graph, schemas.Matching(pairs=[(2, 3)])) is None


@pytest.mark.parametrize(
    "graph, pairs, expected",
    [
        (make_single_edge(), [(1, 2)], [(0.5, 0.5)]),
        (make_graph(), [(1, 2)], [(0.1, 1.1, 0.0)]),
        (make_triangle(), [(1, 2)], [(0.5, 0.5, 0.0)]),
        (make_four_cycle(), [(1, 2), (3, 4)], [(1.0, 1.0, 1.0, 1.0)]),
    ]
)
def test_balanced_allocations__examples__expected(graph, pairs, expected):
    found = services.balanced_allocations(graph, schemas.Matching(pairs=pairs))

    assert len(found) == len(expected)
    for alloc, target in zip(found, expected):
        assert alloc == pytest.approx(target)


def test_balanced_allocations_exact__path__rational(path_graph):
    found = oracles.balanced_allocations_exact(path_graph, schemas.Matching(pairs=[(1, 2)]))
    assert found == [(Fraction(1, 10), Fraction(11, 10), Fraction(0))]


@pytest.mark.parametrize(
    "graph, expected",
    [
        (make_single_edge(), [((1, 2),), (0.5, 0.5)]),
        (make_graph(), [((1, 2),), (0.1, 1.1, 0.0)]),
    ]
)
def test_nash_oracle__integral_graphs__single_outcome(graph, expected):
    outcomes = services.nash_oracle(graph)
    pairs, alloc = expected

    assert len(outcomes) == 1
    assert outcomes[0].matching == schemas.Matching(pairs=pairs)
    assert list(outcomes[0].alloc) == pytest.approx(list(alloc))


def test_nash_oracle__triangle__no_outcome(triangle):
    assert services.nash_oracle(triangle) == []


@pytest.mark.parametrize(
    "graph, expected",
    [(make_graph(), True), (make_four_cycle(), True), (make_triangle(), False)]
)
def test_stable_outcome_exists__examples__expected(graph, expected):
    assert services.stable_outcome_exists(graph) is expected


def test_oracles__too_many_edges__size_guard():
    big = make_complete_graph(8)

    with pytest.raises(SizeGuardError):
        services.enumerate_matchings(big)
    with pytest.raises(SizeGuardError):
        services.lp_relaxation_optimum(big)


def test_small_graph_family__three_agents_two_weights__nine_classes():
    family = list(services.small_graph_family(3, weights=(1, 2)))

    assert len(family) == 9
    assert sorted(g.n for g in family) == [2, 2, 3, 3, 3, 3, 3, 3, 3]


def test_small_graph_family__unit_weights__connected_shapes():
    assert len(list(services.small_graph_family(4, weights=(1,)))) == 1 + 2 + 6


def test_small_graph_family__beyond_atlas__raises():
    with pytest.raises(SizeGuardError):
        list(services.small_graph_family(8))
