import logging

from fastapi import APIRouter, Request

from app.dependencies.rate_limit import limiter
from app.models.requests import SimulateRequest
from app.models.simulation import SimConfig
from app.services import payloads
from app.services.kernels.loader import kernel_from_document
from app.settings import MAX_NODES, RATE_LIMIT, THREADS

logger = logging.getLogger(__name__)

router = APIRouter(tags=["simulation"])


@router.post("/simulate", summary="Monte Carlo ball frequencies")
@limiter.limit(RATE_LIMIT)
def simulate(request: Request, body: SimulateRequest) -> dict:
    """Seeded simulation of ``x``, ``u``, ``xdagger`` or ``u-minus``; identical seeds give identical reports."""
    logger.info(
        "Simulation request received",
        extra={"sim_process": body.process, "samples": body.samples, "seed": body.seed},
    )
    cfg = SimConfig(seed=body.seed, samples=body.samples, depth=body.depth, max_nodes=MAX_NODES, threads=THREADS)
    _, payload = payloads.simulate_payload(kernel_from_document(body.kernel), body.process, cfg, body.compare)
    return payload
