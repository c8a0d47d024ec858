"""Exact ball probabilities for the two branching processes on step kernels.

For ``X_W`` a particle of type ``i`` has, independently for each type ``j``,
``Poisson(w[i][j] mu[j])`` children of type ``j``.  Marking every child by the
isomorphism class of its own ``(k-1)``-ball turns the children into a Poisson
process over classes, which gives

    P_k(i, T) = exp(-deg(i)) * prod_t lambda_t(i)^{l_t} / l_t!,
    lambda_t(i) = sum_j w[i][j] mu[j] P_{k-1}(j, T_t),

where ``T_t`` are the distinct child subtrees of the root with multiplicities
``l_t``.

For ``U_W`` the "other" particles form ``X`` on the Markov renormalization
``W†``.  An ancestral particle additionally has exactly one ancestral child of
type ``j`` with probability ``w[i][j] mu[j] / deg(i)``; summing over which child
class hosts it gives

    A_k(i, T) = sum_S [sum_j q[i][j] A_{k-1}(j, S)] * Pois_k(i, T - S),

with ``Pois_k`` the product above evaluated on ``W†``.

Values are computed as float vectors over root types and memoized per
``(code, depth)``; a law object is not shared between threads.
"""

import numpy as np
from scipy.special import gammaln

from app.errors import TreeError
from app.services.kernels.operations import (
    degrees,
    markov_renormalize,
    require_positive_min_degree,
)
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.trees.rooted_tree import RootedTree, multiplicity_profile, remove_child


def _check_depth(tree: RootedTree, depth: int) -> None:
    if depth < 0:
        raise TreeError(f"depth must be nonnegative, got {depth}")
    if tree.height > depth:
        raise TreeError(f"tree {tree.code} has height {tree.height} > depth {depth}")


class XTreeLaw:
    """Ball probabilities of ``X_W`` for every root type."""

    def __init__(self, kernel: StepAkernel) -> None:
        self.kernel = kernel
        self.means = kernel.offspring_means()
        self.degrees = self.means.sum(axis=1)
        self._cache: dict[tuple[str, int], np.ndarray] = {}

    def poisson_profile(self, tree: RootedTree, depth: int) -> np.ndarray:
        """Probability that the children's ``(depth-1)``-balls form exactly the root profile of *tree*."""
        log_value = -self.degrees.copy()
        with np.errstate(divide="ignore"):
            for child, count in multiplicity_profile(tree).entries:
                rate = self.means @ self.at_types(child, depth - 1)
                log_value += count * np.log(rate) - gammaln(count + 1)
        return np.exp(log_value)

    def at_types(self, tree: RootedTree, depth: int) -> np.ndarray:
        _check_depth(tree, depth)
        key = (tree.code, depth)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if depth == 0:
            value = np.ones(self.kernel.n)
        else:
            value = self.poisson_profile(tree, depth)
        self._cache[key] = value
        return value

    def probability(self, tree: RootedTree, depth: int) -> float:
        return float(self.kernel.mu_array() @ self.at_types(tree, depth))


class UTreeLaw:
    """Ball probabilities of ``U_W`` for every type of the ancestral root."""

    def __init__(self, kernel: StepKernel) -> None:
        require_positive_min_degree(kernel, "the uniform-spanning-tree process")
        self.kernel = kernel
        self.other = XTreeLaw(markov_renormalize(kernel))
        degs = np.array([float(d) for d in degrees(kernel)])
        self.ancestral_step = kernel.offspring_means() / degs[:, None]
        self._cache: dict[tuple[str, int], np.ndarray] = {}

    def at_types(self, tree: RootedTree, depth: int) -> np.ndarray:
        _check_depth(tree, depth)
        key = (tree.code, depth)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        n = self.kernel.n
        if depth == 0:
            value = np.ones(n)
        elif not tree.children:
            value = np.zeros(n)
        else:
            value = np.zeros(n)
            for child, _ in multiplicity_profile(tree).entries:
                ancestral = self.ancestral_step @ self.at_types(child, depth - 1)
                value = value + ancestral * self.other.poisson_profile(remove_child(tree, child), depth)
        self._cache[key] = value
        return value

    def probability(self, tree: RootedTree, depth: int) -> float:
        return float(self.kernel.mu_array() @ self.at_types(tree, depth))


def x_tree_prob_at(kernel: StepAkernel, i: int, tree: RootedTree, depth: int) -> float:
    kernel.check_type(i)
    return float(XTreeLaw(kernel).at_types(tree, depth)[i])


def x_tree_prob(kernel: StepAkernel, tree: RootedTree, depth: int) -> float:
    """``P[(X_W)|depth ≅ tree]`` with the root type drawn from ``mu``."""
    return XTreeLaw(kernel).probability(tree, depth)


def u_tree_prob(kernel: StepKernel, tree: RootedTree, depth: int) -> float:
    """``P[(U_W)|depth ≅ tree]``; needs a kernel with positive minimum degree."""
    return UTreeLaw(kernel).probability(tree, depth)
