"""Token-level evaluation of word sentiment taggers against a gold corpus."""

import csv
import io
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from psentscore.core.errors import AlignmentError
from psentscore.models.schemas import ClassMetrics, TaggerMetrics
from psentscore.services.corpus import LABEL_ORDER, LabeledSentenceCorpus, SentimentLabel
from psentscore.services.lexicon import SentimentLexicon, tag_tokens

logger = logging.getLogger(__name__)

_LABEL_VALUES = [label.value for label in LABEL_ORDER]


@dataclass(frozen=True)
class ConfusionTable:
    """3x3 counts, rows gold and columns predicted, in ``LABEL_ORDER``."""

    matrix: np.ndarray

    @classmethod
    def empty(cls) -> "ConfusionTable":
        return cls(np.zeros((3, 3), dtype=np.int64))

    @classmethod
    def from_sequences(
        cls, gold: Sequence[SentimentLabel], predicted: Sequence[SentimentLabel]
    ) -> "ConfusionTable":
        if not gold:
            return cls.empty()
        matrix = confusion_matrix(
            [SentimentLabel(g).value for g in gold],
            [SentimentLabel(p).value for p in predicted],
            labels=_LABEL_VALUES,
        )
        return cls(matrix.astype(np.int64))

    def __add__(self, other: "ConfusionTable") -> "ConfusionTable":
        return ConfusionTable(self.matrix + other.matrix)

    @property
    def total(self) -> int:
        return int(self.matrix.sum())


def _ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def lexicon_predictions(
    gold: LabeledSentenceCorpus, lexicon: SentimentLexicon
) -> list[list[SentimentLabel]]:
    """Dictionary tagger applied on the gold token boundaries."""
    return [tag_tokens([token.text for token in sentence], lexicon) for sentence in gold.sentences]


def confusion_table(
    gold: LabeledSentenceCorpus, predictions: Sequence[Sequence[SentimentLabel]]
) -> ConfusionTable:
    if len(predictions) != len(gold.sentences):
        raise AlignmentError(
            f"{len(predictions)} predicted sentences for {len(gold.sentences)} gold sentences"
        )
    table = ConfusionTable.empty()
    for index, (sentence, predicted) in enumerate(zip(gold.sentences, predictions)):
        if len(predicted) != len(sentence):
            raise AlignmentError(
                f"sentence {index}: {len(sentence)} gold tokens but {len(predicted)} predictions"
            )
        table = table + ConfusionTable.from_sequences([token.label for token in sentence], predicted)
    return table


def evaluate_tagger(
    gold: LabeledSentenceCorpus,
    predictions: Sequence[Sequence[SentimentLabel]],
    tagger: str = "external",
) -> TaggerMetrics:
    """
    Accuracy and macro precision/recall/F1 (percent) of aligned predictions.

    Args:
        gold: Gold word-labeled corpus
        predictions: One label sequence per gold sentence, same lengths
        tagger: Name recorded in the metrics

    Returns:
        Metrics with per-class breakdown and the confusion table
    """
    table = confusion_table(gold, predictions)
    matrix = table.matrix
    per_class = []
    for index, label in enumerate(LABEL_ORDER):
        true_positive = float(matrix[index, index])
        precision = _ratio(true_positive, float(matrix[:, index].sum()))
        recall = _ratio(true_positive, float(matrix[index, :].sum()))
        f1 = _ratio(2 * precision * recall, precision + recall)
        per_class.append(
            ClassMetrics(
                label=label.value,
                precision=100 * precision,
                recall=100 * recall,
                f1=100 * f1,
                support=int(matrix[index, :].sum()),
            )
        )

    metrics = TaggerMetrics(
        tagger=tagger,
        n_sentences=len(gold.sentences),
        n_tokens=table.total,
        accuracy=100 * _ratio(float(np.trace(matrix)), float(table.total)),
        macro_precision=float(np.mean([c.precision for c in per_class])),
        macro_recall=float(np.mean([c.recall for c in per_class])),
        macro_f1=float(np.mean([c.f1 for c in per_class])),
        per_class=per_class,
        confusion=matrix.tolist(),
    )
    logger.info(
        "[EVAL] %s: accuracy=%.2f macro P/R/F1=%.2f/%.2f/%.2f over %d tokens",
        tagger,
        metrics.accuracy,
        metrics.macro_precision,
        metrics.macro_recall,
        metrics.macro_f1,
        metrics.n_tokens,
    )
    return metrics


def metrics_csv(metrics: TaggerMetrics) -> str:
    """Header plus one row: accuracy, precision, recall, f1."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["tagger", "accuracy", "precision", "recall", "f1"])
    writer.writerow(
        [
            metrics.tagger,
            f"{metrics.accuracy:.2f}",
            f"{metrics.macro_precision:.2f}",
            f"{metrics.macro_recall:.2f}",
            f"{metrics.macro_f1:.2f}",
        ]
    )
    return buffer.getvalue()
