import numpy as np
import pytest

from domain import services
from domain.services import oracles
from tests.factories.graphs import graph_label, make_graph, make_graph_family, make_random_graph

FAMILY = make_graph_family(weights=(1, 2, 3), random_count=30)


def exact_weight(g, matching):
    return sum((oracles.exact(g.weight(i, j)) for i, j in matching.pairs), oracles.exact(0))


@pytest.mark.parametrize("g", FAMILY, ids=graph_label)
def test_stable_outcome_exists__family__iff_relaxation_is_tight(g):
    _, mwm_weight, _ = services.max_weight_matching(g)
    relaxation_value, _, integral = services.lp_relaxation_optimum(g)

    assert integral is (relaxation_value == mwm_weight)
    assert services.stable_outcome_exists(g) is integral


@pytest.mark.parametrize("g", FAMILY, ids=graph_label)
def test_stable_allocation__family__supported_exactly_on_maximum_matchings(g):
    _, mwm_weight, _ = services.max_weight_matching(g)
    stable_exists = services.stable_outcome_exists(g)

    for matching in services.enumerate_matchings(g):
        supported = services.stable_allocation(g, matching) is not None
        maximum = exact_weight(g, matching) == mwm_weight
        if supported:
            assert maximum
        if maximum and stable_exists:
            assert supported


@pytest.mark.parametrize("g", FAMILY, ids=graph_label)
def test_nash_oracle__family__outcomes_pass_predicates(g):
    outcomes = services.nash_oracle(g)

    if services.stable_outcome_exists(g):
        assert outcomes
    for outcome in outcomes:
        assert services.is_valid_outcome(g, outcome)
        assert services.is_nash(g, outcome)


@pytest.mark.slow
def test_lp_relaxation_optimum__two_hundred_random_graphs__matches_vertex_enumeration():
    rng = np.random.default_rng(99)

    for _ in range(200):
        g = make_random_graph(rng, int(rng.integers(2, 6)), 0.6, weights=(0.5, 1, 1.5, 2, 3))
        value, witness, _ = services.lp_relaxation_optimum(g)

        dense_value, _ = oracles.dense_lp_optimum(*oracles.relaxation_as_dense_lp(g))

        assert value == dense_value, graph_label(g)
        assert all(level in (0, oracles.HALF, 1) for level in witness)


def test_nash_oracle__disconnected_graph__one_outcome_per_component():
    g = make_graph(n=4, weights=[(1, 2, 1.0), (3, 4, 2.0)])

    outcomes = services.nash_oracle(g)

    assert len(outcomes) == 1
    assert list(outcomes[0].alloc) == pytest.approx([0.5, 0.5, 1.0, 1.0])
