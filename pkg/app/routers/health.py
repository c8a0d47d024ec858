"""Health-check endpoint.

GET /health returns the status of every critical system:
- api:     always "ok" if this code is running
- compute: runs a one-type exact computation end to end (kernel, refinement,
           tree probability) to verify the numeric stack is functional

HTTP 200 → all checks passed (status="ok")
HTTP 503 → one or more checks failed (status="degraded")
"""

import logging
import math

from fastapi import APIRouter
from fastapi.responses import JSONResponse

from app.services.kernels.step_kernel import constant_kernel
from app.services.probabilities.tree_probs import x_tree_prob
from app.services.refinement.isomorphism import frac_iso
from app.services.trees.rooted_tree import LEAF

logger = logging.getLogger(__name__)

router = APIRouter()


def _check_compute() -> tuple[str, str]:
    """Return ``("compute", "ok")`` or ``("compute", error_message)``."""
    try:
        kernel = constant_kernel(1)
        if not frac_iso(kernel, kernel):
            return "compute", "refinement self-check failed"
        if not math.isclose(x_tree_prob(kernel, LEAF, 1), math.exp(-1), rel_tol=1e-12):
            return "compute", "tree probability self-check failed"
        return "compute", "ok"
    except Exception as exc:  # noqa: BLE001
        logger.error("Health check – compute failed: %s", exc)
        return "compute", str(exc)


@router.get(
    "/health",
    summary="Health check",
    description=(
        "Returns the status of every critical system. "
        "HTTP 200 means all checks passed; HTTP 503 means at least one check failed."
    ),
    tags=["monitoring"],
)
async def health_check() -> JSONResponse:
    checks: dict[str, str] = {"api": "ok"}

    name, result = _check_compute()
    checks[name] = result

    overall = "ok" if all(v == "ok" for v in checks.values()) else "degraded"
    status_code = 200 if overall == "ok" else 503

    return JSONResponse(
        status_code=status_code,
        content={"status": overall, "checks": checks},
    )
