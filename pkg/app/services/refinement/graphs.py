"""Finite simple graphs: coarsest equitable partitions and practional isomorphism.

Two graphs are practionally isomorphic when their coarsest equitable
partitions have the same template ``(D, p)`` with ``p`` the class sizes
divided by the order of the graph.  Templates produced by
:func:`~app.services.refinement.color_refinement.refine_weighted` are
canonically numbered, so templates are compared as plain values.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Union

import networkx as nx
from pydantic import ValidationError

from app.errors import GraphError
from app.models.graph_document import GraphDocument
from app.services.refinement.color_refinement import (
    StablePartition,
    Template,
    refine_weighted,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices ``0..n-1``; edges are stored as ``(low, high)`` pairs."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        normalized = set()
        for edge in self.edges:
            a, b = edge
            if a == b:
                raise GraphError(f"loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise GraphError(f"edge {edge} has an endpoint outside [0, {self.n})")
            normalized.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Graph":
        pairs = []
        for edge in edges:
            pair = tuple(edge)
            if len(pair) != 2:
                raise GraphError(f"edge {list(pair)} does not have two endpoints")
            pairs.append(pair)
        return cls(n, frozenset(pairs))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def adjacency(self) -> List[List[int]]:
        neighbours: List[List[int]] = [[] for _ in range(self.n)]
        for a, b in sorted(self.edges):
            neighbours[a].append(b)
            neighbours[b].append(a)
        return neighbours

    def adjacency_matrix(self) -> List[List[int]]:
        matrix = [[0] * self.n for _ in range(self.n)]
        for a, b in self.edges:
            matrix[a][b] = matrix[b][a] = 1
        return matrix

    def induced(self, vertices: Iterable[int]) -> "Graph":
        chosen = sorted(vertices)
        index = {v: position for position, v in enumerate(chosen)}
        return Graph(
            len(chosen),
            frozenset((index[a], index[b]) for a, b in self.edges if a in index and b in index),
        )


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def parse_graph(data: Any) -> Graph:
    try:
        document = GraphDocument.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise GraphError(f"invalid graph field {location or '<root>'}: {first['msg']}") from exc
    graph = Graph.from_edges(document.n, document.edges)
    if len(graph.edges) != len(document.edges):
        raise GraphError("graph has repeated edges; only simple graphs are supported")
    return graph


def load_graph(path: Union[str, Path]) -> Graph:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_graph(data)


# ---------------------------------------------------------------------------
# Equitable partitions
# ---------------------------------------------------------------------------


def graph_equitable(graph: Graph) -> tuple[StablePartition, Template]:
    """Coarsest equitable partition and its template.

    ``p[j] = |P_j| / v(G)`` and ``D[a][b]`` is the number of neighbours a vertex
    of class ``a`` has in class ``b``.
    """
    matrix = graph.adjacency_matrix()
    partition = refine_weighted([1] * graph.n, matrix)
    k = partition.k
    sizes = [0] * k
    for c in partition.color:
        sizes[c] += 1
    representative = {}
    for v, c in enumerate(partition.color):
        representative.setdefault(c, v)
    D = []
    for a in range(k):
        row = [Fraction(0)] * k
        for v, x in enumerate(matrix[representative[a]]):
            row[partition.color[v]] += x
        D.append(tuple(row))
    p = tuple(Fraction(size, graph.n) for size in sizes)
    return partition, Template(p, tuple(D))


def practional_iso(g: Graph, h: Graph) -> bool:
    """Same coarsest-equitable-partition template."""
    return graph_equitable(g)[1] == graph_equitable(h)[1]


def graph_factor_check(g: Graph, h: Graph) -> bool:
    """Per practional class of connected components, compare the vertex fractions."""
    pieces = []
    for side, graph in (("g", g), ("h", h)):
        for vertices in nx.connected_components(graph.to_networkx()):
            component = graph.induced(vertices)
            pieces.append((side, Fraction(component.n, graph.n), graph_equitable(component)[1]))

    totals: dict[Template, list[Fraction]] = {}
    for side, fraction, template in pieces:
        bucket = totals.setdefault(template, [Fraction(0), Fraction(0)])
        bucket[0 if side == "g" else 1] += fraction
    result = all(a == b for a, b in totals.values())
    logger.debug("Graph factor check", extra={"classes": len(totals), "result": result})
    return result
