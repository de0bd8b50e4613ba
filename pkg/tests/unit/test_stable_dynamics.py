import numpy as np
import pytest

from domain import schemas, services
from domain.core.errors import DomainValidationError, InvariantViolationError, UndecidedMatchingError
from domain.services import stable_dynamics
from domain.services.locality import RecordingView, audit_agent
from tests.factories.graphs import make_four_cycle, make_graph, make_random_graph, make_single_edge, make_triangle
from tests.factories.states import make_stable_state


def random_state(g, rng):
    alpha = rng.uniform(0, 2, g.n) * (rng.uniform(size=g.n) < 0.7)
    s = rng.uniform(0, 1, g.n_edges) * (rng.uniform(size=g.n_edges) < 0.5)
    return make_stable_state(g.n, g.n_edges, alpha_s=alpha, s=s, m=rng.uniform(-1, 2, g.n_edges))


def test_flows__single_edge_at_zero__expected(single_edge):
    st = make_stable_state(2, 1)

    assert services.f_alpha(single_edge, st, 1) == 0.0
    assert services.f_s(single_edge, st, (1, 2)) == -1.0


def test_stable_rhs__single_edge_at_zero__only_matching_state_moves(single_edge):
    rhs = services.stable_rhs(single_edge, make_stable_state(2, 1))

    assert rhs.alpha_s.tolist() == [0.0, 0.0]
    assert rhs.s.tolist() == [0.0]
    assert rhs.m.tolist() == [1.0]


def test_stable_rhs__single_edge_equilibrium__zero(single_edge):
    st = make_stable_state(2, 1, alpha_s=[0.5, 0.5], m=[1.0])

    rhs = services.stable_rhs(single_edge, st)

    assert services.f_alpha(single_edge, st, 1) == 0.0
    assert services.f_s(single_edge, st, (1, 2)) == -1.0
    assert np.allclose(rhs.alpha_s, 0.0) and np.allclose(rhs.s, 0.0) and np.allclose(rhs.m, 0.0)


def test_f_alpha__isolated_vertex__minus_one():
    g = make_graph(n=4)
    assert services.f_alpha(g, make_stable_state(4, 2), 4) == -1.0


def test_stable_rhs__negative_slack__raises(single_edge):
    with pytest.raises(InvariantViolationError):
        services.stable_rhs(single_edge, make_stable_state(2, 1, s=[-0.1]))


def test_stable_rhs__wrong_shape__raises(path_graph):
    with pytest.raises(DomainValidationError):
        services.stable_rhs(path_graph, make_stable_state(2, 1))


@pytest.mark.parametrize("graph", [make_graph(), make_triangle(1.0, 2.0, 0.5), make_four_cycle()])
@pytest.mark.parametrize("dense", [True, False])
def test_stable_rhs__random_states__equals_lp_dynamics_of_assembled_lp(graph, dense, rng):
    problem = services.assemble_lp(graph, dense=dense)

    for _ in range(20):
        st = random_state(graph, rng)
        rhs = services.stable_rhs(graph, st)
        x_dot, z_dot = services.projected_rhs(problem, stable_dynamics.to_lp_state(st))

        assert np.allclose(np.concatenate([rhs.alpha_s, rhs.s]), x_dot, rtol=0, atol=1e-12)
        assert np.allclose(rhs.m, z_dot, rtol=0, atol=1e-12)


def test_stable_rhs__hundred_random_graphs__equals_dense_lp_dynamics(rng):
    for _ in range(100):
        graph = make_random_graph(rng, int(rng.integers(2, 7)))
        problem = services.assemble_lp(graph, dense=True)

        for _ in range(20):
            st = random_state(graph, rng)
            rhs = services.stable_rhs(graph, st)
            x_dot, z_dot = services.projected_rhs(problem, stable_dynamics.to_lp_state(st))

            assert np.max(np.abs(np.concatenate([rhs.alpha_s, rhs.s]) - x_dot)) <= 1e-12
            assert np.max(np.abs(rhs.m - z_dot)) <= 1e-12


def test_assemble_lp__operator__matches_dense(rng):
    g = make_four_cycle()
    dense = services.assemble_lp(g, dense=True)
    operator = services.assemble_lp(g)
    x = rng.normal(size=dense.n_x)
    y = rng.normal(size=dense.m)

    assert not operator.is_dense
    assert np.allclose(dense.matvec(x), operator.matvec(x))
    assert np.allclose(dense.rmatvec(y), operator.rmatvec(y))


@pytest.mark.parametrize("graph", [make_graph(), make_triangle(), make_four_cycle()])
def test_agent_derivative__every_agent__local_and_consistent(graph, rng):
    st = random_state(graph, rng)
    rhs = services.stable_rhs(graph, st)
    view = RecordingView(graph, alpha_s=st.alpha_s, s=st.s, m=st.m)

    for i in graph.vertices:
        assert audit_agent(graph, view, stable_dynamics.agent_derivative, i, radius=1) == []
        own = stable_dynamics.agent_derivative(view, i)
        assert own["alpha_s"] == pytest.approx(rhs.alpha_s[i - 1])
        for j, value in own["s"].items():
            assert value == pytest.approx(rhs.s[graph.edge_id(i, j)])
        for j, value in own["m"].items():
            assert value == pytest.approx(rhs.m[graph.edge_id(i, j)])


def test_audit_agent__far_read__reported(path_graph):
    view = RecordingView(path_graph, alpha_s=np.zeros(3))

    violations = audit_agent(path_graph, view, lambda v, i: v.alpha_s(3), 1, radius=1)

    assert violations == ["agent 1 read state of agent 3"]


@pytest.mark.parametrize(
    "graph, m, threshold, expected",
    [
        (make_graph(), [1.02, -0.01], 0.25, [(1, 2)]),
        (make_graph(), [0.0, 0.9], 0.25, [(2, 3)]),
        (make_graph(), [0.0, 0.0], 0.25, []),
        (make_graph(), [0.6, 0.6], 0.45, None),
        (make_graph(), [0.6, 0.6], 0.25, None),
        (make_graph(), [0.9, 0.95], 0.25, None),
    ]
)
def test_extract_matching__matching_states__expected(graph, m, threshold, expected):
    st = make_stable_state(graph.n, graph.n_edges, m=m)

    matching = services.extract_matching(graph, st, threshold)

    if expected is None:
        assert matching is None
    else:
        assert matching == schemas.Matching(pairs=expected)


@pytest.mark.parametrize("threshold", [0.0, 0.5, 0.7])
def test_extract_matching__threshold_out_of_range__raises(path_graph, threshold):
    with pytest.raises(DomainValidationError):
        services.extract_matching(path_graph, make_stable_state(3, 2), threshold)


def test_run_stable__path__maximum_weight_matching_and_stable_alloc(path_graph):
    result = services.run_stable(path_graph, None, 1e-2, 100.0, sample_stride=100)
    outcome = schemas.Outcome(matching=result.matching, alloc=result.alloc)

    assert result.matching == schemas.Matching(pairs=[(1, 2)])
    assert result.kkt_residual < 1e-3
    assert result.stability_residual < 1e-3
    assert services.is_valid_outcome(path_graph, outcome, tol=1e-3)
    assert "stab_residual" in result.trajectory.columns


def test_run_stable__single_edge__matched():
    result = services.run_stable(make_single_edge(2.0), None, 1e-2, 100.0)

    assert result.matching == schemas.Matching(pairs=[(1, 2)])
    assert sum(result.alloc) == pytest.approx(2.0, abs=1e-3)


def test_run_stable__triangle__undecided_with_half_states(triangle):
    with pytest.raises(UndecidedMatchingError) as exc:
        services.run_stable(triangle, None, 1e-2, 100.0)

    partial = exc.value.result
    assert partial.matching is None
    assert np.allclose(partial.state.m, 0.5, atol=0.05)
    assert "fractional" in str(exc.value)
