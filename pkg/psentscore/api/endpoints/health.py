"""Liveness check with the scorer's configured defaults."""

from fastapi import APIRouter

from psentscore.core.config import settings
from psentscore.services.psent import CHANNELS

router = APIRouter()


@router.get("/health")
async def health_check():
    lexicon_source = str(settings.lexicon_dir) if settings.lexicon_dir else "nltk:opinion_lexicon"
    return {
        "status": "healthy",
        "app": settings.app_name,
        "version": settings.version,
        "lexicon": lexicon_source,
        "channels": list(CHANNELS),
        "summary_policy": settings.summary_policy,
    }
