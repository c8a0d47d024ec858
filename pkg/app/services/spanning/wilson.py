"""Uniform spanning trees via loop-erased random walks, plus an exact count."""

from fractions import Fraction
from typing import Iterable, Optional

import networkx as nx
import numpy as np

from app.errors import GraphError
from app.services.refinement.graphs import Graph

SpanningTree = frozenset[tuple[int, int]]

# Uniforms are drawn in batches; a walk step costs one array lookup.
_BATCH = 4096


def wilson_ust(graph: Graph, rng: np.random.Generator, root: Optional[int] = None) -> SpanningTree:
    """Exactly uniform spanning tree of a connected *graph* (Wilson's algorithm)."""
    if graph.n > 1 and not nx.is_connected(graph.to_networkx()):
        raise GraphError("a uniform spanning tree needs a connected graph")
    neighbours = graph.adjacency()
    degree = np.array([len(nbrs) for nbrs in neighbours])
    in_tree = [False] * graph.n
    successor = [-1] * graph.n
    root = 0 if root is None else root
    if not 0 <= root < graph.n:
        raise GraphError(f"root {root} is not a vertex of a graph on {graph.n} vertices")
    in_tree[root] = True

    uniforms = rng.random(_BATCH)
    used = 0
    for start in range(graph.n):
        v = start
        while not in_tree[v]:
            if used == _BATCH:
                uniforms, used = rng.random(_BATCH), 0
            successor[v] = neighbours[v][int(uniforms[used] * degree[v])]
            used += 1
            v = successor[v]
        v = start
        while not in_tree[v]:
            in_tree[v] = True
            v = successor[v]

    return frozenset(
        (min(v, successor[v]), max(v, successor[v])) for v in range(graph.n) if successor[v] >= 0
    )


def is_spanning_tree(graph: Graph, edges: Iterable[tuple[int, int]]) -> bool:
    """``n - 1`` edges of *graph*, acyclic and touching every vertex."""
    chosen = set(edges)
    if not chosen <= graph.edges:
        return False
    tree = nx.Graph()
    tree.add_nodes_from(range(graph.n))
    tree.add_edges_from(chosen)
    return nx.is_tree(tree)


def spanning_tree_count(graph: Graph) -> int:
    """Number of spanning trees: determinant of the reduced Laplacian, in exact arithmetic."""
    n = graph.n
    if n == 1:
        return 1
    laplacian = [[Fraction(0)] * n for _ in range(n)]
    for a, b in graph.edges:
        laplacian[a][b] -= 1
        laplacian[b][a] -= 1
        laplacian[a][a] += 1
        laplacian[b][b] += 1
    matrix = [row[1:] for row in laplacian[1:]]
    size = n - 1
    determinant = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if matrix[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
            determinant = -determinant
        determinant *= matrix[col][col]
        for r in range(col + 1, size):
            factor = matrix[r][col] / matrix[col][col]
            if factor:
                for c in range(col, size):
                    matrix[r][c] -= factor * matrix[col][c]
    return int(determinant)
