from typing import List

from pydantic import BaseModel, Field


class GraphDocument(BaseModel):
    """Finite simple graph: ``{"n": 10, "edges": [[0, 1], [1, 2]]}``."""

    n: int = Field(..., ge=1)
    edges: List[List[int]] = []
