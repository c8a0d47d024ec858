"""Exact kernel operations: fractional isomorphism, refinement, summary, survival."""

import logging
from fractions import Fraction

from fastapi import APIRouter, HTTPException, Request

from app.dependencies.rate_limit import limiter
from app.models.requests import FiRequest, KernelRequest, SurvivalRequest
from app.services import payloads
from app.services.kernels.loader import kernel_from_document
from app.settings import RATE_LIMIT

logger = logging.getLogger(__name__)

router = APIRouter(tags=["kernels"])


@router.post("/fi", summary="Fractional isomorphism of two kernels")
def fractional_isomorphism(body: FiRequest) -> dict:
    """Decide ``exact``, ``projective`` or ``piecewise`` fractional isomorphism.

    The response carries the decision plus a witness: the joint template for
    ``exact``, the scalar ``t`` for ``projective`` and the component grouping
    for ``piecewise``.
    """
    logger.info("FI request received", extra={"mode": body.mode})
    _, payload = payloads.fi_payload(kernel_from_document(body.u), kernel_from_document(body.w), body.mode)
    return payload


@router.post("/refine", summary="Stable color refinement")
def refine(body: KernelRequest) -> dict:
    _, payload = payloads.refine_payload(kernel_from_document(body.kernel))
    return payload


@router.post("/kernel/summary", summary="Degrees, norms, components and c_W")
def kernel_summary(body: KernelRequest) -> dict:
    _, payload = payloads.summary_payload(kernel_from_document(body.kernel))
    return payload


@router.post("/survival", summary="Survival probability of X_W")
@limiter.limit(RATE_LIMIT)
def survival(request: Request, body: SurvivalRequest) -> dict:
    try:
        factor = Fraction(body.scale) if body.scale is not None else None
    except (ValueError, ZeroDivisionError):
        raise HTTPException(status_code=400, detail=f"scale {body.scale!r} is not a rational number")
    _, payload = payloads.survival_payload(kernel_from_document(body.kernel), factor, body.tol)
    return payload
