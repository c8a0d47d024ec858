"""Finite graphs: practional isomorphism and UST ball statistics."""

import logging

from fastapi import APIRouter, Request

from app.dependencies.rate_limit import limiter
from app.models.requests import GraphFiRequest, UstRequest
from app.services import payloads
from app.services.kernels.loader import kernel_from_document
from app.services.refinement.graphs import parse_graph
from app.settings import RATE_LIMIT, THREADS

logger = logging.getLogger(__name__)

router = APIRouter(tags=["graphs"])


@router.post("/graph-fi", summary="Practional isomorphism of two graphs")
def graph_fi(body: GraphFiRequest) -> dict:
    _, payload = payloads.graph_fi_payload(parse_graph(body.g.model_dump()), parse_graph(body.h.model_dump()))
    return payload


@router.post("/ust", summary="UST ball law on dense W-random graphs")
@limiter.limit(RATE_LIMIT)
def ust(request: Request, body: UstRequest) -> dict:
    """Synchronous UST run; large jobs belong on ``POST /v2/ust``."""
    logger.info("UST request received", extra={"n": body.n, "graphs": body.graphs, "seed": body.seed})
    _, payload = payloads.ust_payload(
        kernel_from_document(body.kernel),
        body.n,
        body.radius,
        body.graphs,
        body.roots_per_graph,
        body.seed,
        threads=THREADS,
        compare=body.compare,
    )
    return payload
