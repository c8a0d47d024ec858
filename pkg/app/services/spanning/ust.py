"""Ball statistics of uniform spanning trees of dense W-random graphs.

Graphs are independent draws keyed by ``(seed, graph block)``; a disconnected
draw is thrown away and redrawn from the same stream, and counted.
"""

import logging
from collections import Counter
from typing import Callable, NamedTuple

import networkx as nx
import numpy as np

from app.errors import BudgetExceededError
from app.models.ball_distribution import BallDistribution
from app.models.graph_balls import GraphBallReport
from app.services.kernels.step_kernel import StepKernel
from app.services.refinement.graphs import Graph
from app.services.simulation.rng import Block, run_blocks
from app.services.spanning.balls import ball_in
from app.services.spanning.random_graphs import sample_dense_graph
from app.services.spanning.wilson import wilson_ust

logger = logging.getLogger(__name__)

GRAPH_BLOCK_SIZE = 8


class GraphTally(NamedTuple):
    codes: Counter
    disconnected: int
    non_tree: int


def _connected_draw(kernel: StepKernel, n: int, rng: np.random.Generator, limit: int) -> tuple[Graph, int]:
    """A connected dense draw and the number of disconnected draws thrown away before it."""
    rejected = 0
    while True:
        graph = sample_dense_graph(kernel, n, rng).graph
        if nx.is_connected(graph.to_networkx()):
            return graph, rejected
        rejected += 1
        if rejected > limit:
            raise BudgetExceededError(
                "sampled graphs are persistently disconnected",
                details={"disconnected": rejected, "n": n},
            )


def _tally_graphs(
    source: Callable[[np.random.Generator], tuple[Graph, int]],
    radius: int,
    roots_per_graph: int,
    rng: np.random.Generator,
    block: Block,
) -> GraphTally:
    codes: Counter = Counter()
    disconnected = 0
    non_tree = 0
    for _ in range(block.size):
        graph, rejected = source(rng)
        disconnected += rejected
        neighbours = graph.adjacency()
        for root in rng.integers(graph.n, size=roots_per_graph):
            found = ball_in(neighbours, int(root), radius)
            codes[found.tree.code] += 1
            non_tree += not found.is_tree
    return GraphTally(codes, disconnected, non_tree)


def tabulate_graph_balls(
    source: Callable[[np.random.Generator], tuple[Graph, int]],
    radius: int,
    graphs: int,
    roots_per_graph: int,
    seed: int,
    threads: int,
) -> GraphBallReport:
    """Run *source* once per graph and tabulate the balls around uniform roots."""
    tallies = run_blocks(
        graphs,
        seed,
        threads,
        lambda rng, block: _tally_graphs(source, radius, roots_per_graph, rng, block),
        block_size=GRAPH_BLOCK_SIZE,
    )
    codes: Counter = Counter()
    disconnected = non_tree = 0
    for tally in tallies:
        codes.update(tally.codes)
        disconnected += tally.disconnected
        non_tree += tally.non_tree
    if disconnected > graphs:
        raise BudgetExceededError(
            "more than half of the sampled graphs were disconnected",
            details={"disconnected": disconnected, "graphs": graphs},
        )

    total = graphs * roots_per_graph
    warnings = []
    if roots_per_graph > 1:
        warnings.append("balls sharing a graph are correlated; effective sample size is below graphs * roots_per_graph")
    if disconnected:
        logger.warning("Resampled disconnected graphs", extra={"disconnected": disconnected, "graphs": graphs})
    return GraphBallReport(
        distribution=BallDistribution(
            depth=radius,
            entries={code: codes[code] / total for code in sorted(codes)},
        ),
        graphs=graphs,
        roots_per_graph=roots_per_graph,
        resampled_disconnected=disconnected,
        non_tree_balls=non_tree,
        warnings=warnings,
    )


def ust_ball_distribution(
    kernel: StepKernel,
    n: int,
    radius: int,
    graphs: int,
    roots_per_graph: int,
    seed: int,
    threads: int = 1,
) -> GraphBallReport:
    """Balls of radius *radius* in one uniform spanning tree per connected dense W-random graph."""

    def source(rng: np.random.Generator) -> tuple[Graph, int]:
        graph, rejected = _connected_draw(kernel, n, rng, limit=graphs)
        return Graph(n, wilson_ust(graph, rng)), rejected

    logger.info(
        "Sampling UST balls",
        extra={"n": n, "radius": radius, "graphs": graphs, "roots_per_graph": roots_per_graph, "seed": seed},
    )
    return tabulate_graph_balls(source, radius, graphs, roots_per_graph, seed, threads)
