"""Empirical ball distributions and generation statistics.

Every run is cut into seed-keyed blocks (see :mod:`.rng`).  A block returns
integer tallies only, and tallies are summed in block order, so a report is
bit-identical for any worker count.
"""

import logging
from collections import Counter
from typing import Callable, List, NamedTuple

import numpy as np

from app.errors import TreeError
from app.models.ball_distribution import BallDistribution
from app.models.simulation import Process, SimConfig, SimReport
from app.services.kernels.operations import markov_renormalize
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.simulation.branching import GenerationCounter, Sample, USampler, XSampler
from app.services.simulation.rng import Block, run_blocks

logger = logging.getLogger(__name__)

Draw = Callable[[np.random.Generator], Sample]


class Tally(NamedTuple):
    codes: Counter
    truncated: int
    size_sums: np.ndarray
    extinct: np.ndarray


def _tally(draw: Draw, generations: int, rng: np.random.Generator, block: Block) -> Tally:
    codes: Counter = Counter()
    truncated = 0
    size_sums = np.zeros(generations, dtype=np.int64)
    extinct = np.zeros(generations, dtype=np.int64)
    for _ in range(block.size):
        sample = draw(rng)
        if sample.truncated:
            truncated += 1
            continue
        sizes = np.asarray(sample.generation_sizes, dtype=np.int64)
        size_sums += sizes
        extinct += sizes == 0
        if sample.code:
            codes[sample.code] += 1
    return Tally(codes, truncated, size_sums, extinct)


def _merge(tallies: List[Tally], generations: int) -> Tally:
    codes: Counter = Counter()
    truncated = 0
    size_sums = np.zeros(generations, dtype=np.int64)
    extinct = np.zeros(generations, dtype=np.int64)
    for tally in tallies:
        codes.update(tally.codes)
        truncated += tally.truncated
        size_sums += tally.size_sums
        extinct += tally.extinct
    return Tally(codes, truncated, size_sums, extinct)


def _run(draw: Draw, generations: int, cfg: SimConfig) -> Tally:
    tallies = run_blocks(
        cfg.samples,
        cfg.seed,
        cfg.threads,
        lambda rng, block: _tally(draw, generations, rng, block),
    )
    return _merge(tallies, generations)


def _distribution(tally: Tally, depth: int, samples: int) -> BallDistribution:
    entries = {code: tally.codes[code] / samples for code in sorted(tally.codes)}
    return BallDistribution(depth=depth, entries=entries, residual=tally.truncated / samples)


def _report(process: str, tally: Tally, cfg: SimConfig, depth: int, with_distribution: bool) -> SimReport:
    if tally.truncated:
        logger.warning(
            "Samples hit the node cap",
            extra={"sim_process": process, "truncated": tally.truncated, "max_nodes": cfg.max_nodes},
        )
    complete = cfg.samples - tally.truncated
    means = [float(x) / complete for x in tally.size_sums] if complete else None
    return SimReport(
        process=process,
        samples=cfg.samples,
        distribution=_distribution(tally, depth, cfg.samples) if with_distribution else None,
        truncated_samples=tally.truncated,
        extinction_by_generation=[float(x) / cfg.samples for x in tally.extinct],
        mean_generation_size=means,
    )


def empirical_ball_distribution(draw: Draw, cfg: SimConfig) -> BallDistribution:
    """Frequencies of canonical classes over ``cfg.samples`` draws; truncated draws go to the residual."""
    tally = _run(draw, cfg.depth, cfg)
    return _distribution(tally, cfg.depth, cfg.samples)


def tv_distance(a: BallDistribution, b: BallDistribution) -> float:
    """Half the L1 distance over the union of classes, residuals counted as one more class."""
    if a.depth != b.depth:
        raise TreeError(f"cannot compare ball distributions of depth {a.depth} and {b.depth}")
    keys = set(a.entries) | set(b.entries)
    total = sum(abs(a.probability(key) - b.probability(key)) for key in keys)
    total += abs(a.residual - b.residual)
    return min(1.0, total / 2)


def sampler_for(kernel: StepAkernel, process: Process, cfg: SimConfig) -> Draw:
    if process == "x":
        return XSampler(kernel, cfg.depth, cfg.max_nodes).draw
    if process == "xdagger":
        return XSampler(markov_renormalize(kernel), cfg.depth, cfg.max_nodes).draw
    if process in ("u", "u-minus"):
        return USampler(kernel, cfg.depth, cfg.max_nodes, suppress_ancestral=process == "u-minus").draw
    raise ValueError(f"unknown process {process!r}")


def simulate(kernel: StepAkernel, process: Process, cfg: SimConfig) -> SimReport:
    """Empirical depth-``cfg.depth`` ball law of *process* plus generation statistics."""
    if process != "x" and not isinstance(kernel, StepKernel):
        raise ValueError(f"process {process!r} needs a symmetric kernel")
    logger.info(
        "Simulating",
        extra={"sim_process": process, "samples": cfg.samples, "depth": cfg.depth, "seed": cfg.seed},
    )
    tally = _run(sampler_for(kernel, process, cfg), cfg.depth, cfg)
    return _report(process, tally, cfg, cfg.depth, with_distribution=True)


def extinction_stats(kernel: StepKernel, horizon: int, cfg: SimConfig) -> SimReport:
    """Extinct-by-generation fractions and mean generation sizes of ``X_{K†}`` up to *horizon*.

    Types of degree zero follow the ``0/0 = 0`` convention of the Markov
    renormalization, so the zero kernel is allowed and dies out at once.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}")
    counter = GenerationCounter(markov_renormalize(kernel), horizon, cfg.max_nodes)
    tally = _run(counter.draw, horizon, cfg)
    return _report("xdagger", tally, cfg, horizon, with_distribution=False)


def coarsen(distribution: BallDistribution, max_vertices: int) -> BallDistribution:
    """Move the mass of trees with more than *max_vertices* vertices into the residual.

    Puts an empirical law on the same footing as an exact law tabulated with
    the same vertex bound, so their TV distance compares like with like.
    """
    kept = {code: p for code, p in distribution.entries.items() if code.count("(") <= max_vertices}
    moved = sum(p for code, p in distribution.entries.items() if code not in kept)
    return BallDistribution(depth=distribution.depth, entries=kept, residual=distribution.residual + moved)
