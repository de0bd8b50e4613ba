from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Edge = tuple[int, int]


def normalize_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


class WeightedGraph(BaseModel):
    """Undirected graph on vertices 1..n with nonnegative edge weights."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    weights: dict[Edge, float] = Field(default_factory=dict)

    @field_validator("weights", mode="before")
    @classmethod
    def normalize_weights(cls, value):
        items = value.items() if isinstance(value, dict) else (((i, j), w) for i, j, w in value)
        normalized: dict[Edge, float] = {}
        for (i, j), w in items:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            key = normalize_edge(int(i), int(j))
            if key in normalized:
                raise ValueError(f"duplicate edge {key}")
            normalized[key] = w
        return normalized

    @model_validator(mode="after")
    def check_edges(self):
        for (i, j), w in self.weights.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {(i, j)} outside vertices 1..{self.n}")
            if not w >= 0:
                raise ValueError(f"negative weight on edge {(i, j)}")
        return self

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.weights))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {edge: k for k, edge in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adjacency: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adjacency[i].append(j)
            adjacency[j].append(i)
        return {v: tuple(sorted(nbrs)) for v, nbrs in adjacency.items()}

    @cached_property
    def tails(self) -> np.ndarray:
        """0-based smaller endpoint of every edge, in `edges` order."""
        return np.array([i - 1 for i, _ in self.edges], dtype=np.intp)

    @cached_property
    def heads(self) -> np.ndarray:
        return np.array([j - 1 for _, j in self.edges], dtype=np.intp)

    @cached_property
    def weight_vector(self) -> np.ndarray:
        return np.array([self.weights[e] for e in self.edges], dtype=float)

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        """Dense n × n weights, 0-based, zero where there is no edge."""
        matrix = np.zeros((self.n, self.n))
        matrix[self.tails, self.heads] = self.weight_vector
        matrix[self.heads, self.tails] = self.weight_vector
        return matrix

    @cached_property
    def arc_sources(self) -> np.ndarray:
        """0-based source of every directed arc; arc k and k + |E| are the two directions of edge k."""
        return np.concatenate([self.tails, self.heads])

    @cached_property
    def arc_targets(self) -> np.ndarray:
        return np.concatenate([self.heads, self.tails])

    @cached_property
    def arc_edges(self) -> np.ndarray:
        edge_ids = np.arange(self.n_edges, dtype=np.intp)
        return np.concatenate([edge_ids, edge_ids])

    @cached_property
    def arc_weights(self) -> np.ndarray:
        return np.concatenate([self.weight_vector, self.weight_vector])

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def has_edge(self, i: int, j: int) -> bool:
        return normalize_edge(i, j) in self.weights

    def weight(self, i: int, j: int) -> float:
        return self.weights[normalize_edge(i, j)]

    def edge_id(self, i: int, j: int) -> int:
        return self.edge_index[normalize_edge(i, j)]


class Matching(BaseModel):
    model_config = ConfigDict(frozen=True)

    pairs: frozenset[Edge] = frozenset()

    @field_validator("pairs", mode="before")
    @classmethod
    def normalize_pairs(cls, value):
        return frozenset(normalize_edge(int(i), int(j)) for i, j in value)

    @model_validator(mode="after")
    def check_disjoint(self):
        seen: set[int] = set()
        for i, j in self.pairs:
            if i == j or i in seen or j in seen:
                raise ValueError("matching edges must be vertex-disjoint")
            seen.update((i, j))
        return self

    @cached_property
    def partners(self) -> dict[int, int]:
        partners: dict[int, int] = {}
        for i, j in self.pairs:
            partners[i] = j
            partners[j] = i
        return partners

    def partner(self, i: int) -> int | None:
        return self.partners.get(i)

    def sorted_pairs(self) -> list[Edge]:
        return sorted(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class Outcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    matching: Matching = Field(default_factory=Matching)
    alloc: tuple[float, ...]

    @field_validator("alloc", mode="before")
    @classmethod
    def convert_alloc(cls, value):
        return tuple(float(a) for a in value)
