"""Main FastAPI application."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from psentscore.api.endpoints import health, score
from psentscore.core.config import settings
from psentscore.core.errors import PSentError
from psentscore.core.logging import configure_logging

logger = logging.getLogger("psentscore.main")


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Startup and shutdown logging."""
    configure_logging(settings.log_level)
    logger.info("[STARTUP] %s v%s starting...", settings.app_name, settings.version)
    logger.info("[CONFIG] Lexicon directory: %s", settings.lexicon_dir or "<nltk opinion_lexicon>")
    logger.info("[CONFIG] Max upload size: %dMB", settings.max_upload_mb)
    yield
    logger.info("[SHUTDOWN] %s shutting down...", settings.app_name)


app = FastAPI(
    title=settings.app_name,
    version=settings.version,
    description="Affective-content preservation measures for dialogue summaries",
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)


@app.exception_handler(PSentError)
async def psent_error_handler(request: Request, exc: PSentError) -> JSONResponse:
    """Toolkit errors become 422 responses carrying the error code."""
    return JSONResponse(status_code=422, content={"detail": exc.to_dict()})


# Include routers
app.include_router(health.router, tags=["Health"])
app.include_router(score.router, prefix="/api", tags=["Score"])
