"""Tabulated ball laws over all enumerated trees, with the uncovered mass as residual."""

from typing import Callable, Iterable

from app.models.ball_distribution import BallDistribution
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.probabilities.tree_probs import UTreeLaw, XTreeLaw
from app.services.trees.enumeration import enumerate_trees
from app.services.trees.rooted_tree import RootedTree


def _tabulate(trees: Iterable[RootedTree], depth: int, probability: Callable[[RootedTree], float]) -> BallDistribution:
    entries = {}
    for tree in trees:
        p = probability(tree)
        if p > 0:
            entries[tree.code] = p
    residual = max(0.0, 1.0 - sum(entries.values()))
    return BallDistribution(depth=depth, entries=entries, residual=residual)


def x_ball_distribution(kernel: StepAkernel, depth: int, max_vertices: int) -> BallDistribution:
    law = XTreeLaw(kernel)
    return _tabulate(enumerate_trees(depth, max_vertices), depth, lambda t: law.probability(t, depth))


def x_ball_distribution_at(kernel: StepAkernel, i: int, depth: int, max_vertices: int) -> BallDistribution:
    """Ball law of ``X_W`` started from a root of type *i*."""
    kernel.check_type(i)
    law = XTreeLaw(kernel)
    return _tabulate(
        enumerate_trees(depth, max_vertices), depth, lambda t: float(law.at_types(t, depth)[i])
    )


def u_ball_distribution(kernel: StepKernel, depth: int, max_vertices: int) -> BallDistribution:
    law = UTreeLaw(kernel)
    return _tabulate(enumerate_trees(depth, max_vertices), depth, lambda t: law.probability(t, depth))
