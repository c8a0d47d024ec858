import logging
import os

import inngest.fast_api
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded

from app.dependencies.rate_limit import limiter
from app.errors import BudgetExceededError
from app.inngest_client import INNGEST_FUNCTIONS, inngest_client
from app.logging_config import configure_logging
from app.routers.graphs import router as graphs_router
from app.routers.health import router as health_router
from app.routers.kernels import router as kernels_router
from app.routers.probabilities import router as probabilities_router
from app.routers.simulation import router as simulation_router
from app.routers.ust_v2 import router as ust_v2_router

configure_logging()

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Branchly",
    description=(
        "Exact fractional-isomorphism decisions, branching-process ball probabilities "
        "and seeded Monte Carlo on finite-type kernels."
    ),
    version="1.0.0",
)

# Rate-limiting state
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)


@app.exception_handler(ValueError)
async def invalid_input_handler(request: Request, exc: ValueError) -> JSONResponse:
    logger.info("Invalid input for %s: %s", request.url, exc)
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(BudgetExceededError)
async def budget_exceeded_handler(request: Request, exc: BudgetExceededError) -> JSONResponse:
    logger.warning("Budget exceeded for %s: %s", request.url, exc)
    return JSONResponse(status_code=503, content={"detail": str(exc), "details": exc.details})


@app.exception_handler(Exception)
async def generic_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    logger.exception("Unhandled exception for %s", request.url)
    return JSONResponse(status_code=500, content={"detail": "An unexpected error occurred."})


app.include_router(kernels_router, prefix="/v1")
app.include_router(probabilities_router, prefix="/v1")
app.include_router(simulation_router, prefix="/v1")
app.include_router(graphs_router, prefix="/v1")
app.include_router(health_router)
app.include_router(ust_v2_router, prefix="/v2")

# Inngest endpoint – served at /api/inngest when either INNGEST_DEV=1 (dev
# mode) or INNGEST_SIGNING_KEY is configured (production mode).
if os.getenv("INNGEST_DEV") == "1" or os.getenv("INNGEST_SIGNING_KEY"):
    inngest.fast_api.serve(app, inngest_client, INNGEST_FUNCTIONS)
else:
    logger.warning(
        "Inngest endpoint not registered: set INNGEST_DEV=1 for dev mode "
        "or INNGEST_SIGNING_KEY for production mode."
    )


@app.get("/", summary="API root")
async def root() -> dict:
    return {"message": "Hello from Branchly"}
