"""Tokenize, score and filter endpoints."""

from functools import lru_cache
from typing import Literal, Optional

from fastapi import APIRouter, File, HTTPException, UploadFile

from psentscore import __version__
from psentscore.core.config import settings
from psentscore.models.schemas import (
    FilterResponse,
    ScoreMetadata,
    ScoreReport,
    TokenizeRequest,
    TokenizeResponse,
)
from psentscore.services.corpus import DialogueSummaryPair, parse_pairs
from psentscore.services.lexicon import (
    SentimentLexicon,
    TagSet,
    parse_external_tags,
    resolve_lexicon,
    tag_corpus,
)
from psentscore.services.scoring import QUARTILE_METHOD, build_score_report, filter_corpus
from psentscore.services.stats import RANK_METHOD, VARIANCE_CONVENTION
from psentscore.services.tokenizer import tokenize

router = APIRouter()


@lru_cache(maxsize=1)
def get_lexicon() -> SentimentLexicon:
    """Lexicon from settings, loaded once per process."""
    return resolve_lexicon(None, None, settings)


async def _read_upload(upload: UploadFile) -> list[str]:
    content = await upload.read()
    if len(content) > settings.max_upload_bytes:
        raise HTTPException(
            status_code=413,
            detail=f"File too large. Maximum size: {settings.max_upload_mb}MB",
        )
    try:
        return content.decode("utf-8").splitlines()
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail=f"{upload.filename} is not UTF-8 text")


async def _tagged_corpus(
    pairs_file: UploadFile,
    tags_file: Optional[UploadFile],
    format: str,
    keep_speaker_tokens: bool,
) -> tuple[list[DialogueSummaryPair], TagSet]:
    pairs = parse_pairs(await _read_upload(pairs_file), format=format, source=pairs_file.filename or "pairs")
    if tags_file is not None:
        assignments = parse_external_tags(
            await _read_upload(tags_file),
            pairs,
            keep_speaker_tokens=keep_speaker_tokens,
            source=tags_file.filename or "tags",
        )
        return pairs, TagSet(assignments, name=f"external:{tags_file.filename}")
    lexicon = get_lexicon()
    return pairs, TagSet(tag_corpus(pairs, lexicon, keep_speaker_tokens, settings.workers), name=lexicon.name)


@router.post("/tokenize", response_model=TokenizeResponse)
async def tokenize_text(request: TokenizeRequest):
    """Tokenize one text exactly as the scorer does."""
    stream = tokenize(request.text, request.keep_speaker_tokens)
    return TokenizeResponse(tokens=list(stream.tokens), spans=list(stream.spans))


@router.post("/score", response_model=ScoreReport)
async def score_pairs(
    pairs: UploadFile = File(...),
    tags: Optional[UploadFile] = File(None),
    format: Literal["simple", "multi_reference"] = "simple",
    summary_policy: Literal["each", "mean"] = "each",
    keep_speaker_tokens: bool = False,
):
    """
    Compute PSentScore for an uploaded pair file.

    Args:
        pairs: Pair file, one JSON record per line
        tags: Optional tag file; the configured lexicon is used otherwise
        format: Pair file layout
        summary_policy: ``each`` or ``mean`` over multiple references

    Returns:
        Score report over all three channels
    """
    corpus, tag_set = await _tagged_corpus(pairs, tags, format, keep_speaker_tokens)
    metadata = ScoreMetadata(
        toolkit_version=__version__,
        tagger=tag_set.name,
        summary_policy=summary_policy,
        keep_speaker_tokens=keep_speaker_tokens,
        rank_ties=RANK_METHOD,
        variance_convention=VARIANCE_CONVENTION,
        quartile_method=QUARTILE_METHOD,
    )
    return build_score_report(corpus, tag_set, metadata, workers=settings.workers)


@router.post("/filter", response_model=FilterResponse)
async def filter_pairs(
    pairs: UploadFile = File(...),
    tags: Optional[UploadFile] = File(None),
    format: Literal["simple", "multi_reference"] = "simple",
    mode: Literal["train_like", "test_like"] = "train_like",
    keep_speaker_tokens: bool = False,
):
    """Filter an uploaded pair file by affective content."""
    corpus, tag_set = await _tagged_corpus(pairs, tags, format, keep_speaker_tokens)
    kept, report = filter_corpus(corpus, tag_set, mode)
    return FilterResponse(report=report, kept_ids=[pair.id for pair in kept])
