from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from app.models.ball_distribution import BallDistribution
from app.settings import MAX_NODES, THREADS

Process = Literal["x", "u", "xdagger", "u-minus"]


class SimConfig(BaseModel):
    """Reproducible Monte Carlo run parameters; results depend on everything but ``threads``."""

    seed: int = Field(..., ge=0, lt=2**64, description="Explicit 64-bit seed.")
    samples: int = Field(default=10_000, ge=1)
    depth: int = Field(default=2, ge=0, description="Truncation level of every sample.")
    max_nodes: int = Field(default=MAX_NODES, ge=1, description="Per-sample safety cap.")
    threads: int = Field(default=THREADS, ge=1, description="Worker threads; never changes results.")


class SimReport(BaseModel):
    """Empirical counterpart of the exact ball laws plus generation statistics.

    ``extinction_by_generation[g - 1]`` is the fraction of samples with an empty
    generation ``g``; ``mean_generation_size[g - 1]`` the mean size of generation ``g``
    over the samples that stayed under the node cap, ``None`` when none did.
    """

    process: str
    samples: int
    distribution: Optional[BallDistribution] = None
    truncated_samples: int = 0
    extinction_by_generation: List[float] = []
    mean_generation_size: Optional[List[float]] = []
