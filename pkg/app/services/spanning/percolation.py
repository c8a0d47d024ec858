"""Sparse graph limits: ``G(n, W/n)`` and ``a / n`` percolation of dense W-random graphs.

Balls around a uniform vertex approach the balls of ``X_W`` for the sparse
model and of ``X_{aW}`` for the percolated one.
"""

import logging

import numpy as np

from app.errors import GraphError
from app.models.graph_balls import GraphBallReport
from app.services.kernels.step_kernel import StepKernel
from app.services.refinement.graphs import Graph
from app.services.spanning.random_graphs import sample_dense_graph, sample_sparse_graph
from app.services.spanning.ust import tabulate_graph_balls

logger = logging.getLogger(__name__)


def percolate(graph: Graph, a: float, rng: np.random.Generator) -> Graph:
    """Keep each edge independently with probability ``min(1, a / v(G))``."""
    if a < 0:
        raise GraphError(f"percolation parameter must be nonnegative, got {a}")
    edges = sorted(graph.edges)
    keep = rng.random(len(edges)) < min(1.0, a / graph.n)
    return Graph(graph.n, frozenset(edge for edge, kept in zip(edges, keep) if kept))


def percolation_ball_distribution(
    kernel: StepKernel,
    a: float,
    n: int,
    radius: int,
    graphs: int,
    seed: int,
    threads: int = 1,
) -> GraphBallReport:
    """Balls around one uniform vertex of each percolated dense W-random graph."""

    def source(rng: np.random.Generator) -> tuple[Graph, int]:
        return percolate(sample_dense_graph(kernel, n, rng).graph, a, rng), 0

    logger.info("Sampling percolation balls", extra={"n": n, "a": a, "radius": radius, "graphs": graphs, "seed": seed})
    report = tabulate_graph_balls(source, radius, graphs, 1, seed, threads)
    if report.non_tree_balls:
        logger.warning("Percolated balls with cycles were coded by their BFS tree", extra={"count": report.non_tree_balls})
    return report


def sparse_ball_distribution(
    kernel: StepKernel,
    n: int,
    radius: int,
    graphs: int,
    seed: int,
    threads: int = 1,
) -> GraphBallReport:
    """Balls around one uniform vertex of each ``G(n, W/n)``."""

    def source(rng: np.random.Generator) -> tuple[Graph, int]:
        return sample_sparse_graph(kernel, n, rng).graph, 0

    logger.info("Sampling sparse graph balls", extra={"n": n, "radius": radius, "graphs": graphs, "seed": seed})
    report = tabulate_graph_balls(source, radius, graphs, 1, seed, threads)
    if report.non_tree_balls:
        logger.warning("Sparse balls with cycles were coded by their BFS tree", extra={"count": report.non_tree_balls})
    return report
