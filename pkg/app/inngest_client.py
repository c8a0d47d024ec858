"""Inngest client and background functions for Branchly.

Long uniform-spanning-tree runs (many graphs on a few hundred vertices) are
too slow for a request/response cycle; ``POST /v2/ust`` sends a
``branchly/ust.requested`` event and the function below does the sampling.

The Inngest endpoint is served at ``/api/inngest`` by ``app/main.py``.

Environment variables
---------------------
INNGEST_DEV
    Set to ``1`` to run in dev mode (connects to the local Dev Server).
INNGEST_BASE_URL
    Base URL of a self-hosted Inngest server (both API calls and event
    delivery), e.g. ``http://inngest.internal:8288``.
INNGEST_EVENT_API_BASE_URL
    Override only the event-sending endpoint.  Ignored when
    ``INNGEST_BASE_URL`` is set.
INNGEST_SIGNING_KEY
    Signing key used to verify requests arriving at ``/api/inngest``.
    Required in production mode.

Local quick start::

    INNGEST_DEV=1 uvicorn main:app --reload
"""

import logging
import os

import inngest

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Inngest client
# ---------------------------------------------------------------------------

_base_url: str | None = os.getenv("INNGEST_BASE_URL") or None
_event_api_base_url: str | None = os.getenv("INNGEST_EVENT_API_BASE_URL") or None
_signing_key: str | None = os.getenv("INNGEST_SIGNING_KEY") or None

inngest_client = inngest.Inngest(
    app_id="branchly",
    logger=logging.getLogger("uvicorn"),
    is_production=os.getenv("INNGEST_DEV") != "1",
    api_base_url=_base_url,
    event_api_base_url=_event_api_base_url if not _base_url else None,
    signing_key=_signing_key,
)

# ---------------------------------------------------------------------------
# Background functions
# ---------------------------------------------------------------------------


def run_ust_job(data: dict) -> dict:
    """Run a UST ball-law job described by a ``POST /v1/ust`` body."""
    from app.models.requests import UstRequest
    from app.services import payloads
    from app.services.kernels.loader import kernel_from_document
    from app.settings import THREADS

    body = UstRequest.model_validate(data)
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


@inngest_client.create_function(
    fn_id="ust_balls",
    trigger=inngest.TriggerEvent(event="branchly/ust.requested"),
)
async def fn_ust_balls(ctx: inngest.Context, step: inngest.Step) -> dict:
    """Background UST job triggered by ``branchly/ust.requested``.

    The event data is a ``POST /v1/ust`` body; the return value is the same
    payload the synchronous route returns.
    """
    data: dict = dict(ctx.event.data)
    ctx.logger.info("Inngest ust_balls started", extra={"n": data.get("n"), "seed": data.get("seed")})

    async def _sample() -> dict:
        return run_ust_job(data)

    return await step.run("sample_ust_balls", _sample)


# ---------------------------------------------------------------------------
# Exported list of all registered functions (used by main.py)
# ---------------------------------------------------------------------------

INNGEST_FUNCTIONS: list[inngest.Function] = [fn_ust_balls]
