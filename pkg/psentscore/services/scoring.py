"""Corpus-level PSentScore, affect-based filtering and distribution summaries."""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from psentscore.core.errors import ConfigError, InsufficientSamplesError, PSentError
from psentscore.models.schemas import (
    Channel,
    ChannelError,
    DistributionPair,
    DistributionReport,
    DistributionSummary,
    FilterReport,
    ScoreChannel,
    ScoreMetadata,
    ScoreReport,
    SummaryPolicy,
)
from psentscore.services import stats
from psentscore.services.corpus import DialogueSummaryPair
from psentscore.services.lexicon import TagSet
from psentscore.services.psent import CHANNELS, PairPSent, psent_for_pair

logger = logging.getLogger(__name__)

FilterMode = Literal["train_like", "test_like"]

WHISKER_IQR = 1.5
QUARTILE_METHOD = "linear"


def compute_pair_psents(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    summary_policy: SummaryPolicy = "each",
    workers: int = 1,
) -> list[PairPSent]:
    """PSent for every pair, fanned out over ``workers`` threads, in input order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda pair: psent_for_pair(pair, tags, summary_policy), pairs))
    return [psent_for_pair(pair, tags, summary_policy) for pair in pairs]


def _series(psents: Iterable[PairPSent], channel: Channel) -> tuple[list[float], list[float]]:
    """One (dialogue, summary) entry per summary triple."""
    x: list[float] = []
    y: list[float] = []
    for item in psents:
        dialogue_value = item.dialogue.value(channel)
        for summary in item.summaries:
            x.append(dialogue_value)
            y.append(summary.value(channel))
    return x, y


def score_psents(psents: Sequence[PairPSent], channel: Channel) -> ScoreChannel:
    """Zero-PSentDial removal, then Spearman / CCC / MAE over the survivors."""
    x, y = _series(psents, channel)
    kept = [(a, b) for a, b in zip(x, y) if a != 0.0]
    if len(kept) < 2:
        raise InsufficientSamplesError(
            f"insufficient samples after zero-filtering ({channel}: {len(kept)} of {len(x)})"
        )
    series = stats.PairedSeries.of([a for a, _ in kept], [b for _, b in kept])
    return ScoreChannel(
        channel=channel,
        spearman=stats.spearman(series),
        ccc=stats.ccc(series),
        mae=stats.mae(series),
        n_used=series.n,
        n_total=len(x),
    )


def score_corpus(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    channel: Channel = "all",
    summary_policy: SummaryPolicy = "each",
    workers: int = 1,
) -> ScoreChannel:
    """
    PSentScore for one polarity channel.

    Args:
        pairs: Tagged corpus
        tags: Labels for every dialogue and summary
        channel: ``all`` (PSent), ``positive`` (PSent_P) or ``negative`` (PSent_N)
        summary_policy: How multiple summaries enter the series

    Returns:
        Channel entry with the three statistics and ``n_used``
    """
    psents = compute_pair_psents(pairs, tags, summary_policy, workers)
    return score_psents(psents, channel)


def build_score_report(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    metadata: ScoreMetadata,
    channels: Sequence[Channel] = CHANNELS,
    workers: int = 1,
) -> ScoreReport:
    """Score every requested channel; undefined channels carry their error instead."""
    psents = compute_pair_psents(pairs, tags, metadata.summary_policy, workers)
    entries = []
    for channel in channels:
        try:
            entry = score_psents(psents, channel)
            logger.info(
                "[SCORE] %s: spearman=%.4f ccc=%.4f mae=%.4f (n=%d)",
                channel,
                entry.spearman,
                entry.ccc,
                entry.mae,
                entry.n_used,
            )
        except PSentError as e:
            x, _ = _series(psents, channel)
            entry = ScoreChannel(
                channel=channel,
                n_used=sum(1 for value in x if value != 0.0),
                n_total=len(x),
                error=ChannelError(code=e.code, message=e.message),
            )
            logger.warning("[SCORE] %s: %s [%s]", channel, e.message, e.code)
        entries.append(entry)
    return ScoreReport(metadata=metadata, channels=entries)


def filter_corpus(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    mode: FilterMode = "train_like",
) -> tuple[list[DialogueSummaryPair], FilterReport]:
    """
    Drop pairs without affective content.

    ``train_like`` drops a pair when its dialogue or any summary has PSent 0;
    ``test_like`` only looks at the dialogue. A pair is charged to the
    dialogue cause first when both sides are zero.
    """
    if mode not in ("train_like", "test_like"):
        raise ValueError(f"unknown filter mode {mode!r}")

    kept = []
    dropped_dialogue = 0
    dropped_summary = 0
    for pair in pairs:
        item = psent_for_pair(pair, tags, "each")
        if item.dialogue.charged_ratio == 0:
            dropped_dialogue += 1
        elif mode == "train_like" and any(s.charged_ratio == 0 for s in item.summaries):
            dropped_summary += 1
        else:
            kept.append(pair)

    total = len(pairs)
    report = FilterReport(
        mode=mode,
        kept=len(kept),
        dropped_zero_dialogue=dropped_dialogue,
        dropped_zero_summary=dropped_summary,
        total=total,
        kept_fraction=len(kept) / total if total else 0.0,
    )
    logger.info(
        "[FILTER] %s kept %d/%d (zero dialogue: %d, zero summary: %d)",
        mode,
        report.kept,
        total,
        dropped_dialogue,
        dropped_summary,
    )
    return kept, report


def distribution_summary(values: Sequence[float]) -> DistributionSummary:
    """
    Box-plot statistics.

    Quartiles by linear interpolation between closest ranks; whiskers at the
    most extreme points within 1.5 IQR of the box, never inside it.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("distribution of no values")

    q1, median, q3 = (float(q) for q in np.percentile(x, [25, 50, 75], method=QUARTILE_METHOD))
    iqr = q3 - q1

    inside_high = x[x <= q3 + WHISKER_IQR * iqr]
    whisker_high = max(q3, float(inside_high.max())) if inside_high.size else q3
    inside_low = x[x >= q1 - WHISKER_IQR * iqr]
    whisker_low = min(q1, float(inside_low.min())) if inside_low.size else q1

    outliers = sorted(float(v) for v in x if v < whisker_low or v > whisker_high)
    return DistributionSummary(
        n=int(x.size),
        median=median,
        q1=q1,
        q3=q3,
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        mean=float(x.mean()),
        outliers=outliers,
    )


def _distribution_pair(x: Sequence[float], y: Sequence[float]) -> DistributionPair:
    return DistributionPair(dialogue=distribution_summary(x), summary=distribution_summary(y))


def affect_distributions(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    channel: Channel = "all",
    summary_policy: SummaryPolicy = "each",
    workers: int = 1,
) -> DistributionReport:
    """PSentDial vs. PSentSumm distributions, on all samples and without zero samples."""
    psents = compute_pair_psents(pairs, tags, summary_policy, workers)
    x, y = _series(psents, channel)
    if not x:
        raise InsufficientSamplesError("no samples to summarize")
    kept = [(a, b) for a, b in zip(x, y) if a != 0.0 and b != 0.0]
    filtered: Optional[DistributionPair] = None
    if kept:
        filtered = _distribution_pair([a for a, _ in kept], [b for _, b in kept])
    return DistributionReport(
        channel=channel,
        summary_policy=summary_policy,
        full=_distribution_pair(x, y),
        filtered=filtered,
        filtered_n=len(kept),
    )


def subsample_corpus(
    pairs: Sequence[DialogueSummaryPair], size: int, seed: int = 0
) -> list[DialogueSummaryPair]:
    """Seeded random sample of ``size`` pairs, returned in input order."""
    if not 0 <= size <= len(pairs):
        raise ConfigError(f"sample size {size} outside [0, {len(pairs)}]")
    chosen = sorted(random.Random(seed).sample(range(len(pairs)), size))
    return [pairs[i] for i in chosen]


def rank_by_affect(
    pairs: Sequence[DialogueSummaryPair],
    tags: TagSet,
    channel: Channel = "all",
    top_k: Optional[int] = None,
) -> list[tuple[DialogueSummaryPair, float]]:
    """Pairs by descending dialogue-side channel value; ties keep input order."""
    scored = [
        (pair, psent_for_pair(pair, tags, "each").dialogue.value(channel)) for pair in pairs
    ]
    scored.sort(key=lambda item: -item[1])
    return scored if top_k is None else scored[:top_k]
