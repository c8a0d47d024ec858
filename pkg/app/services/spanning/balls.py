"""Radius-``r`` balls around a vertex, coded as canonical rooted trees."""

from typing import Iterable, List, NamedTuple, Sequence, Union

from app.errors import GraphError, TreeError
from app.services.refinement.graphs import Graph
from app.services.trees.rooted_tree import RootedTree


class Ball(NamedTuple):
    """BFS tree of the ball; ``is_tree`` is false when the ball itself has a cycle."""

    tree: RootedTree
    is_tree: bool


def _build(vertex: int, children: dict[int, List[int]]) -> RootedTree:
    return RootedTree(tuple(_build(child, children) for child in children.get(vertex, ())))


def ball_in(neighbours: Sequence[Iterable[int]], root: int, radius: int) -> Ball:
    """Ball of *radius* around *root* in the graph given by adjacency lists."""
    if radius < 0:
        raise TreeError(f"radius must be nonnegative, got {radius}")
    if not 0 <= root < len(neighbours):
        raise GraphError(f"root {root} is not a vertex of a graph on {len(neighbours)} vertices")
    seen = {root}
    children: dict[int, List[int]] = {}
    frontier = [root]
    for _ in range(radius):
        following = []
        for v in frontier:
            for u in neighbours[v]:
                if u not in seen:
                    seen.add(u)
                    children.setdefault(v, []).append(u)
                    following.append(u)
        frontier = following
    inside = sum(1 for v in seen for u in neighbours[v] if u in seen) // 2
    return Ball(_build(root, children), inside == len(seen) - 1)


def ball(source: Union[Graph, Iterable[tuple[int, int]]], root: int, radius: int, n: int = 0) -> Ball:
    """Ball around *root* in a :class:`Graph` or in an edge set on ``n`` vertices."""
    graph = source if isinstance(source, Graph) else Graph(max(n, 1), frozenset(source))
    return ball_in(graph.adjacency(), root, radius)
