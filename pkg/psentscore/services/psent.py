"""PSent: proportion of sentiment-charged words in a document."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from psentscore.core.errors import EmptyDocumentError
from psentscore.models.schemas import Channel, SummaryPolicy
from psentscore.services.corpus import DialogueSummaryPair, SentimentLabel
from psentscore.services.lexicon import DIALOGUE, TagSet, summary_key

CHANNELS: tuple[Channel, ...] = ("all", "positive", "negative")


@dataclass(frozen=True)
class TokenCounts:
    pos_n: int
    neg_n: int
    total_n: int

    def __post_init__(self) -> None:
        if min(self.pos_n, self.neg_n, self.total_n) < 0 or self.pos_n + self.neg_n > self.total_n:
            raise ValueError(f"inconsistent counts {self}")

    def __add__(self, other: "TokenCounts") -> "TokenCounts":
        return TokenCounts(
            self.pos_n + other.pos_n, self.neg_n + other.neg_n, self.total_n + other.total_n
        )


@dataclass(frozen=True)
class PSentTriple:
    """
    PSent, PSent_P and PSent_N of one document.

    Ratios are kept as exact fractions so that ``psent == psent_p + psent_n``
    holds without rounding; the float properties are the boundary view.
    For a mean over several summaries ``counts`` is the sum of the
    underlying counts while the ratios are the mean of the per-summary ratios.
    """

    counts: TokenCounts
    positive_ratio: Fraction
    negative_ratio: Fraction

    @property
    def charged_ratio(self) -> Fraction:
        return self.positive_ratio + self.negative_ratio

    @property
    def psent(self) -> float:
        return float(self.charged_ratio)

    @property
    def psent_p(self) -> float:
        return float(self.positive_ratio)

    @property
    def psent_n(self) -> float:
        return float(self.negative_ratio)

    def exact(self, channel: Channel) -> Fraction:
        if channel == "all":
            return self.charged_ratio
        if channel == "positive":
            return self.positive_ratio
        if channel == "negative":
            return self.negative_ratio
        raise ValueError(f"unknown channel {channel!r}")

    def value(self, channel: Channel) -> float:
        return float(self.exact(channel))


def compute_psent(labels: Sequence[SentimentLabel]) -> PSentTriple:
    """PSent triple of a labeled document; an empty document is an error."""
    if not labels:
        raise EmptyDocumentError("empty document")
    pos_n = sum(1 for label in labels if label == SentimentLabel.POSITIVE)
    neg_n = sum(1 for label in labels if label == SentimentLabel.NEGATIVE)
    total_n = len(labels)
    return PSentTriple(
        counts=TokenCounts(pos_n, neg_n, total_n),
        positive_ratio=Fraction(pos_n, total_n),
        negative_ratio=Fraction(neg_n, total_n),
    )


def mean_triple(triples: Sequence[PSentTriple]) -> PSentTriple:
    """Field-wise arithmetic mean of several triples."""
    if not triples:
        raise ValueError("mean of no triples")
    k = len(triples)
    counts = triples[0].counts
    for triple in triples[1:]:
        counts = counts + triple.counts
    return PSentTriple(
        counts=counts,
        positive_ratio=sum((t.positive_ratio for t in triples), Fraction(0)) / k,
        negative_ratio=sum((t.negative_ratio for t in triples), Fraction(0)) / k,
    )


@dataclass(frozen=True)
class PairPSent:
    """PSentDial and the PSentSumm value(s) of one pair."""

    doc_id: str
    dialogue: PSentTriple
    summaries: tuple[PSentTriple, ...]


def _triple_for(tags: TagSet, doc_id: str, which: str) -> PSentTriple:
    try:
        return compute_psent(tags.get(doc_id, which))
    except EmptyDocumentError as e:
        e.doc_id = doc_id
        e.message = f"{which}: empty document"
        raise


def psent_for_pair(
    pair: DialogueSummaryPair, tags: TagSet, summary_policy: SummaryPolicy = "each"
) -> PairPSent:
    """
    Compute PSentDial and PSentSumm for one pair.

    Args:
        pair: Dialogue with its summaries
        tags: Labels covering the dialogue and every summary
        summary_policy: ``each`` gives one triple per summary, ``mean`` one
            averaged triple

    Returns:
        Dialogue triple and summary triple(s)
    """
    if summary_policy not in ("each", "mean"):
        raise ValueError(f"unknown summary policy {summary_policy!r}")
    dialogue = _triple_for(tags, pair.id, DIALOGUE)
    summaries = tuple(
        _triple_for(tags, pair.id, summary_key(k)) for k in range(len(pair.summaries))
    )
    if summary_policy == "mean":
        summaries = (mean_triple(summaries),)
    return PairPSent(doc_id=pair.id, dialogue=dialogue, summaries=summaries)
