"""Exhaustive enumeration of rooted trees under a height and a vertex bound."""

from functools import lru_cache
from typing import List

from app.errors import TreeError
from app.services.trees.rooted_tree import LEAF, RootedTree


def _forests(candidates: tuple[RootedTree, ...], budget: int, start: int) -> List[tuple[RootedTree, ...]]:
    """Multisets of trees from ``candidates[start:]`` with at most *budget* vertices in total."""
    found: List[tuple[RootedTree, ...]] = [()]
    for index in range(start, len(candidates)):
        tree = candidates[index]
        if tree.vertices > budget:
            continue
        for rest in _forests(candidates, budget - tree.vertices, index):
            found.append((tree,) + rest)
    return found


@lru_cache(maxsize=64)
def _enumerate(max_height: int, max_vertices: int) -> tuple[RootedTree, ...]:
    if max_height == 0 or max_vertices == 1:
        return (LEAF,)
    smaller = _enumerate(max_height - 1, max_vertices - 1)
    trees = {RootedTree(forest) for forest in _forests(smaller, max_vertices - 1, 0)}
    return tuple(sorted(trees, key=lambda t: (t.vertices, t.code)))


def enumerate_trees(max_height: int, max_vertices: int) -> List[RootedTree]:
    """One representative per isomorphism class, ordered by ``(v(T), code)``."""
    if max_height < 0 or max_vertices < 1:
        raise TreeError("enumeration needs max_height >= 0 and max_vertices >= 1")
    return list(_enumerate(max_height, max_vertices))
