"""V2 UST endpoint: enqueues a background Inngest job instead of sampling in the request.

The body is the same as ``POST /v1/ust``; the sampling runs in the
``branchly/ust.requested`` function defined in ``app/inngest_client.py``.
"""

import logging

import inngest
from fastapi import APIRouter, HTTPException

from app.inngest_client import inngest_client
from app.models.requests import UstRequest

logger = logging.getLogger(__name__)

router = APIRouter(tags=["graphs"])


@router.post(
    "/ust",
    summary="Async UST ball law (Inngest-backed)",
    description=(
        "Enqueues a background UST job via Inngest and returns the event ID "
        "immediately; inspect the result in the Inngest dashboard."
    ),
)
async def ust_async(body: UstRequest) -> dict:
    logger.info("V2 UST request received", extra={"n": body.n, "graphs": body.graphs, "seed": body.seed})
    try:
        ids = await inngest_client.send(inngest.Event(name="branchly/ust.requested", data=body.model_dump()))
    except Exception as exc:
        logger.error("Failed to enqueue UST job: %s", exc)
        raise HTTPException(status_code=502, detail="Failed to enqueue UST job.")

    event_id = ids[0] if ids else ""
    return {"status": "queued", "event_id": event_id}
