"""Splittable seeding for reproducible parallel Monte Carlo.

Samples are cut into fixed-size blocks; block ``b`` draws from a generator
keyed by ``(seed, b)`` through :class:`numpy.random.SeedSequence`.  The block
layout never depends on the worker count, so results are identical for any
number of threads.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, TypeVar

import numpy as np

BLOCK_SIZE = 512

R = TypeVar("R")


class Block(NamedTuple):
    index: int
    start: int
    stop: int

    @property
    def size(self) -> int:
        return self.stop - self.start


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for substream *index* of *seed*."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def blocks(samples: int, block_size: int = BLOCK_SIZE) -> List[Block]:
    return [
        Block(index, start, min(start + block_size, samples))
        for index, start in enumerate(range(0, samples, block_size))
    ]


def run_blocks(
    samples: int,
    seed: int,
    threads: int,
    worker: Callable[[np.random.Generator, Block], R],
    block_size: int = BLOCK_SIZE,
) -> List[R]:
    """Run *worker* on every block with its own stream; results come back in block order."""
    layout = blocks(samples, block_size)

    def call(block: Block) -> R:
        return worker(stream(seed, block.index), block)

    if threads <= 1 or len(layout) <= 1:
        return [call(block) for block in layout]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(call, layout))
