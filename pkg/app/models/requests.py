from typing import Literal, Optional

from pydantic import BaseModel, Field

from app.models.graph_document import GraphDocument
from app.models.kernel_document import KernelDocument
from app.models.simulation import Process


class KernelRequest(BaseModel):
    kernel: KernelDocument


class KernelPairRequest(BaseModel):
    u: KernelDocument
    w: KernelDocument


class FiRequest(KernelPairRequest):
    mode: Literal["exact", "projective", "piecewise"] = "exact"


class SeparateRequest(KernelPairRequest):
    max_height: int = Field(default=3, ge=1, le=5)
    max_vertices: int = Field(default=8, ge=1, le=12)


class SurvivalRequest(KernelRequest):
    scale: Optional[str] = Field(default=None, description="Rational factor applied to the kernel first.")
    tol: float = Field(default=1e-12, gt=0)


class TreeProbRequest(KernelRequest):
    process: Literal["x", "u"] = "x"
    depth: int = Field(..., ge=0, le=6)
    tree: Optional[str] = Field(default=None, description="Canonical code; omit to tabulate every tree.")
    max_vertices: int = Field(default=6, ge=1, le=12)


class SimulateRequest(KernelRequest):
    process: Process = "x"
    depth: int = Field(default=2, ge=0, le=6)
    samples: int = Field(default=10_000, ge=1, le=200_000)
    seed: int = Field(..., ge=0, lt=2**64)
    compare: bool = False


class GraphFiRequest(BaseModel):
    g: GraphDocument
    h: GraphDocument


class UstRequest(KernelRequest):
    n: int = Field(..., ge=2, le=2000)
    radius: int = Field(default=1, ge=0, le=4)
    graphs: int = Field(default=50, ge=1, le=2000)
    roots_per_graph: int = Field(default=1, ge=1, le=10)
    seed: int = Field(..., ge=0, lt=2**64)
    compare: bool = False
