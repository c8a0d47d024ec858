"""Bounded search for a tree whose ball probabilities tell two akernels apart.

If two akernels are not fractionally isomorphic some finite tree separates
them, but nothing bounds its size; within the given bounds the search may
come back empty.
"""

import logging
from typing import NamedTuple, Optional

from app.errors import TreeError
from app.services.kernels.step_kernel import StepAkernel
from app.services.probabilities.tree_probs import XTreeLaw
from app.services.trees.enumeration import enumerate_trees
from app.services.trees.rooted_tree import RootedTree

logger = logging.getLogger(__name__)

SEPARATION_THRESHOLD = 1e-9


class SeparatingTree(NamedTuple):
    tree: RootedTree
    depth: int
    p_u: float
    p_w: float


def separating_tree_search(
    u: StepAkernel,
    w: StepAkernel,
    max_height: int,
    max_vertices: int,
) -> Optional[SeparatingTree]:
    """First ``(depth, tree)`` in ``(depth, v(T), code)`` order with differing probabilities."""
    if max_height < 1 or max_vertices < 1:
        raise TreeError("separating-tree search needs bounds of at least 1")
    law_u, law_w = XTreeLaw(u), XTreeLaw(w)
    for depth in range(1, max_height + 1):
        for tree in enumerate_trees(depth, max_vertices):
            p_u = law_u.probability(tree, depth)
            p_w = law_w.probability(tree, depth)
            if abs(p_u - p_w) > SEPARATION_THRESHOLD:
                logger.debug("Separating tree found", extra={"tree": tree.code, "depth": depth})
                return SeparatingTree(tree, depth, p_u, p_w)
    return None
