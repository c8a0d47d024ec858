"""Exact ball probabilities and separating-tree search."""

import logging

from fastapi import APIRouter, Request

from app.dependencies.rate_limit import limiter
from app.models.requests import SeparateRequest, TreeProbRequest
from app.services import payloads
from app.services.kernels.loader import kernel_from_document
from app.settings import RATE_LIMIT

logger = logging.getLogger(__name__)

router = APIRouter(tags=["probabilities"])


@router.post("/tree-prob", summary="Exact ball probabilities")
@limiter.limit(RATE_LIMIT)
def tree_prob(request: Request, body: TreeProbRequest) -> dict:
    """Probability of one tree, or the whole law over trees with at most ``max_vertices`` vertices."""
    logger.info("Tree probability request received", extra={"sim_process": body.process, "depth": body.depth})
    _, payload = payloads.tree_prob_payload(
        kernel_from_document(body.kernel), body.process, body.depth, body.tree, body.max_vertices
    )
    return payload


@router.post("/separate", summary="Bounded separating-tree search")
@limiter.limit(RATE_LIMIT)
def separate(request: Request, body: SeparateRequest) -> dict:
    _, payload = payloads.separate_payload(
        kernel_from_document(body.u), kernel_from_document(body.w), body.max_height, body.max_vertices
    )
    return payload
