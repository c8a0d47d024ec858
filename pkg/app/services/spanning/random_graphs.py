"""W-random graphs on step kernels.

Types ``x_1..x_n`` are drawn from ``mu``; each pair ``i < j`` then becomes
an edge independently with probability ``min(1, w[x_i][x_j] / scale)``:
``scale = n`` gives the sparse model ``G(n, W/n)``, ``scale = 1`` the dense
W-random graph.
"""

import logging
from typing import NamedTuple

import numpy as np

from app.errors import GraphError
from app.services.kernels.operations import max_entry
from app.services.kernels.step_kernel import StepKernel
from app.services.refinement.graphs import Graph

logger = logging.getLogger(__name__)


class SampledGraph(NamedTuple):
    graph: Graph
    vertex_types: tuple[int, ...]


def _float_matrix(kernel: StepKernel) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in kernel.w])


def _sample(kernel: StepKernel, n: int, scale: float, rng: np.random.Generator) -> SampledGraph:
    types = rng.choice(kernel.n, size=n, p=kernel.mu_array())
    probabilities = np.minimum(1.0, _float_matrix(kernel)[np.ix_(types, types)] / scale)
    coins = rng.random((n, n)) < probabilities
    rows, cols = np.nonzero(np.triu(coins, k=1))
    edges = frozenset(zip(rows.tolist(), cols.tolist()))
    return SampledGraph(Graph(n, edges), tuple(int(t) for t in types))


def sample_sparse_graph(kernel: StepKernel, n: int, rng: np.random.Generator) -> SampledGraph:
    """``G(n, W/n)``: edge probability ``min(1, W(x_i, x_j) / n)``."""
    if n < 1:
        raise GraphError(f"a sampled graph needs n >= 1, got {n}")
    return _sample(kernel, n, float(n), rng)


def sample_dense_graph(kernel: StepKernel, n: int, rng: np.random.Generator) -> SampledGraph:
    """Dense W-random graph: edge probability ``min(1, W(x_i, x_j))``."""
    if n < 2:
        raise GraphError(f"a dense sampled graph needs n >= 2, got {n}")
    if max_entry(kernel) > 1:
        logger.warning(
            "Kernel entries above 1 are clipped; the graphs no longer converge to this kernel",
            extra={"max_entry": float(max_entry(kernel))},
        )
    return _sample(kernel, n, 1.0, rng)
