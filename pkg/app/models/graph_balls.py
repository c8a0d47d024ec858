from typing import List

from pydantic import BaseModel, Field

from app.models.ball_distribution import BallDistribution


class GraphBallReport(BaseModel):
    """Ball law estimated on sampled finite graphs (UST or percolation)."""

    distribution: BallDistribution
    graphs: int = Field(..., ge=1)
    roots_per_graph: int = Field(..., ge=1)
    resampled_disconnected: int = 0
    non_tree_balls: int = 0
    warnings: List[str] = []
