"""Per-agent state views used to audit which states an agent's update reads."""
from collections.abc import Callable

import networkx as nx
import numpy as np

from domain.schemas import Edge, WeightedGraph, normalize_edge


class StateView:
    """Read access to the joint state, addressed the way agents address it."""

    def __init__(
            self,
            g: WeightedGraph,
            alpha_s: np.ndarray | None = None,
            s: np.ndarray | None = None,
            m: np.ndarray | None = None,
            alpha_b: np.ndarray | None = None,
    ):
        self.g = g
        self._alpha_s = alpha_s
        self._s = s
        self._m = m
        self._alpha_b = alpha_b

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.g.neighbors(i)

    def weight(self, i: int, j: int) -> float:
        return self.g.weight(i, j)

    def alpha_s(self, i: int) -> float:
        return float(self._alpha_s[i - 1])

    def alpha_b(self, i: int) -> float:
        return float(self._alpha_b[i - 1])

    def slack(self, i: int, j: int) -> float:
        return float(self._s[self.g.edge_id(i, j)])

    def matching_state(self, i: int, j: int) -> float:
        return float(self._m[self.g.edge_id(i, j)])


class RecordingView(StateView):
    """StateView that records the owner of every state read and every weight read.

    Edge states s_ij and m_ij belong to agent min(i, j).
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.owners: set[int] = set()
        self.weights: set[Edge] = set()

    def weight(self, i: int, j: int) -> float:
        self.weights.add(normalize_edge(i, j))
        return super().weight(i, j)

    def alpha_s(self, i: int) -> float:
        self.owners.add(i)
        return super().alpha_s(i)

    def alpha_b(self, i: int) -> float:
        self.owners.add(i)
        return super().alpha_b(i)

    def slack(self, i: int, j: int) -> float:
        self.owners.add(min(i, j))
        return super().slack(i, j)

    def matching_state(self, i: int, j: int) -> float:
        self.owners.add(min(i, j))
        return super().matching_state(i, j)


def hop_distances(g: WeightedGraph, source: int) -> dict[int, int]:
    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from(g.edges)
    return nx.single_source_shortest_path_length(graph, source)


def audit_agent(
        g: WeightedGraph,
        view: RecordingView,
        update: Callable[[RecordingView, int], object],
        i: int,
        radius: int,
) -> list[str]:
    """Run one agent update through `view` and list every read beyond `radius` hops.

    State reads must come from agents at most `radius` hops away; weight
    reads must touch an agent at most `radius - 1` hops away.
    """
    view.owners.clear()
    view.weights.clear()
    update(view, i)

    hops = hop_distances(g, i)
    violations = [
        f"agent {i} read state of agent {k}"
        for k in sorted(view.owners)
        if hops.get(k, np.inf) > radius
    ]
    violations += [
        f"agent {i} read weight {edge}"
        for edge in sorted(view.weights)
        if min(hops.get(edge[0], np.inf), hops.get(edge[1], np.inf)) > radius - 1
    ]
    return violations
