"""Generation-by-generation samplers for the branching processes.

A sample is grown level by level: every level keeps the types of its
particles and, for each particle, the index of its parent in the previous
level.  Offspring counts for a whole level are one vectorized
``Generator.poisson`` call; the type-stripped canonical code is then built
bottom-up from the parent pointers.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np

from app.services.kernels.operations import markov_renormalize, require_positive_min_degree
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.trees.rooted_tree import RootedTree, parse_code

logger = logging.getLogger(__name__)


class Sample(NamedTuple):
    """One truncated draw; ``code`` is ``None`` when the draw hit ``max_nodes``."""

    code: Optional[str]
    generation_sizes: tuple[int, ...]

    @property
    def truncated(self) -> bool:
        return self.code is None


def _probabilities(values: np.ndarray) -> np.ndarray:
    total = values.sum()
    return values / total


def _children(means: np.ndarray, types: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Poisson offspring of every particle in *types*: ``(child types, parent positions)``."""
    counts = rng.poisson(means[types])
    n = means.shape[1]
    child_types = np.repeat(np.tile(np.arange(n), len(types)), counts.ravel())
    child_parents = np.repeat(np.arange(len(types)), counts.sum(axis=1))
    return child_types, child_parents


def _encode(parents: List[np.ndarray], sizes: List[int]) -> str:
    """Canonical code of the tree described by per-level parent pointers."""
    codes = ["()"] * sizes[-1]
    for level in range(len(parents) - 1, 0, -1):
        buckets: List[List[str]] = [[] for _ in range(sizes[level - 1])]
        for code, parent in zip(codes, parents[level]):
            buckets[parent].append(code)
        codes = ["(" + "".join(sorted(bucket)) + ")" for bucket in buckets]
    return codes[0]


def _padded(sizes: List[int], depth: int) -> tuple[int, ...]:
    generations = sizes[1:]
    return tuple(generations) + (0,) * (depth - len(generations))


class XSampler:
    """Draws truncated balls of ``X_K`` with the root type distributed as ``mu``."""

    def __init__(self, kernel: StepAkernel, depth: int, max_nodes: int) -> None:
        self.kernel = kernel
        self.depth = depth
        self.max_nodes = max_nodes
        self.means = kernel.offspring_means()
        self.mu = kernel.mu_array()

    def draw(self, rng: np.random.Generator, root_type: Optional[int] = None) -> Sample:
        if root_type is None:
            root_type = int(rng.choice(self.kernel.n, p=self.mu))
        types = np.array([root_type])
        parents: List[np.ndarray] = [np.zeros(0, dtype=int)]
        sizes = [1]
        total = 1
        for _ in range(self.depth):
            if len(types) == 0:
                break
            types, child_parents = _children(self.means, types, rng)
            total += len(types)
            if total > self.max_nodes:
                return Sample(None, _padded(sizes, self.depth))
            parents.append(child_parents)
            sizes.append(len(types))
        return Sample(_encode(parents, sizes), _padded(sizes, self.depth))


class USampler:
    """Draws truncated balls of ``U_K``.

    The root is ancestral with type distributed as ``mu``.  Each level stores
    its (single) ancestral particle first; it gets one ancestral child of type
    ``j`` with probability ``w[i][j] mu[j] / deg(i)``, and every particle gets
    Poisson "other" children from ``K†``.  With ``suppress_ancestral`` the
    root's ancestral child is never drawn, which samples ``U⁻_K``.
    """

    def __init__(self, kernel: StepKernel, depth: int, max_nodes: int, suppress_ancestral: bool = False) -> None:
        require_positive_min_degree(kernel, "the uniform-spanning-tree process")
        self.kernel = kernel
        self.depth = depth
        self.max_nodes = max_nodes
        self.suppress_ancestral = suppress_ancestral
        means = kernel.offspring_means()
        self.ancestral_step = means / means.sum(axis=1, keepdims=True)
        self.other_means = markov_renormalize(kernel).offspring_means()
        self.mu = kernel.mu_array()

    def draw(self, rng: np.random.Generator, root_type: Optional[int] = None) -> Sample:
        n = self.kernel.n
        if root_type is None:
            root_type = int(rng.choice(n, p=self.mu))
        types = np.array([root_type])
        ancestral = not self.suppress_ancestral
        parents: List[np.ndarray] = [np.zeros(0, dtype=int)]
        sizes = [1]
        total = 1
        for _ in range(self.depth):
            if len(types) == 0:
                break
            other_types, other_parents = _children(self.other_means, types, rng)
            if ancestral:
                heir = int(rng.choice(n, p=_probabilities(self.ancestral_step[types[0]])))
                other_types = np.concatenate(([heir], other_types))
                other_parents = np.concatenate(([0], other_parents))
            types = other_types
            total += len(types)
            if total > self.max_nodes:
                return Sample(None, _padded(sizes, self.depth))
            parents.append(other_parents)
            sizes.append(len(types))
        return Sample(_encode(parents, sizes), _padded(sizes, self.depth))


def sample_x(kernel: StepAkernel, depth: int, rng: np.random.Generator, max_nodes: int = 10**6) -> Optional[RootedTree]:
    """One draw of ``(X_K)|depth``; ``None`` when the draw was truncated."""
    sample = XSampler(kernel, depth, max_nodes).draw(rng)
    return None if sample.truncated else parse_code(sample.code)


def sample_u(
    kernel: StepKernel,
    depth: int,
    rng: np.random.Generator,
    max_nodes: int = 10**6,
    suppress_ancestral: bool = False,
) -> Optional[RootedTree]:
    sample = USampler(kernel, depth, max_nodes, suppress_ancestral).draw(rng)
    return None if sample.truncated else parse_code(sample.code)


class GenerationCounter:
    """Type counts per generation only, for long horizons.

    A generation holding ``c_i`` particles of type ``i`` produces
    ``Poisson(sum_i c_i m[i][j])`` children of type ``j``, so no per-particle
    structure is needed.
    """

    def __init__(self, kernel: StepAkernel, horizon: int, max_nodes: int) -> None:
        self.kernel = kernel
        self.horizon = horizon
        self.max_nodes = max_nodes
        self.means = kernel.offspring_means()
        self.mu = kernel.mu_array()

    def draw(self, rng: np.random.Generator) -> Sample:
        counts = np.zeros(self.kernel.n, dtype=np.int64)
        counts[int(rng.choice(self.kernel.n, p=self.mu))] = 1
        sizes = [1]
        total = 1
        for _ in range(self.horizon):
            if not counts.any():
                sizes.append(0)
                continue
            counts = rng.poisson(counts @ self.means)
            size = int(counts.sum())
            total += size
            if total > self.max_nodes:
                return Sample(None, _padded(sizes, self.horizon))
            sizes.append(size)
        return Sample("", _padded(sizes, self.horizon))
