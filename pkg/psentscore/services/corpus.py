"""Corpus ingestion: dialogue-summary pair files and token-labeled SA corpora."""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Literal, Union

from pydantic import ValidationError

from psentscore.core.errors import (
    DuplicateIdError,
    RecordFormatError,
    UnknownLabelError,
)
from psentscore.models.schemas import PairRecord

logger = logging.getLogger(__name__)

PairFormat = Literal["simple", "multi_reference"]
Origin = Literal["reference", "generated"]
Split = Literal["train", "validation", "test"]

SUMMARY_FIELDS = ("summary", "summary2", "summary3")


class SentimentLabel(str, Enum):
    """Three-class word sentiment (SST3 scale)."""

    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"

    @property
    def rank(self) -> int:
        return _RANK3[self]

    @property
    def code(self) -> str:
        """One-letter code used in tag files."""
        return _CODES[self]

    @classmethod
    def from_code(cls, code: str) -> "SentimentLabel":
        return _FROM_CODE[code]


class FineSentimentLabel(str, Enum):
    """Five-grade sentiment as distributed with the treebank."""

    VERY_NEGATIVE = "very_negative"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"
    VERY_POSITIVE = "very_positive"

    @property
    def rank(self) -> int:
        return list(FineSentimentLabel).index(self)


_RANK3 = {SentimentLabel.NEGATIVE: 0, SentimentLabel.NEUTRAL: 1, SentimentLabel.POSITIVE: 2}
_CODES = {SentimentLabel.NEGATIVE: "n", SentimentLabel.NEUTRAL: "o", SentimentLabel.POSITIVE: "p"}
_FROM_CODE = {code: label for label, code in _CODES.items()}

# Order matters for the confusion table: rows/columns follow this sequence.
LABEL_ORDER = (SentimentLabel.NEGATIVE, SentimentLabel.NEUTRAL, SentimentLabel.POSITIVE)

_MERGE = {
    FineSentimentLabel.VERY_NEGATIVE: SentimentLabel.NEGATIVE,
    FineSentimentLabel.NEGATIVE: SentimentLabel.NEGATIVE,
    FineSentimentLabel.NEUTRAL: SentimentLabel.NEUTRAL,
    FineSentimentLabel.POSITIVE: SentimentLabel.POSITIVE,
    FineSentimentLabel.VERY_POSITIVE: SentimentLabel.POSITIVE,
}


def merge_five_to_three(label5: FineSentimentLabel) -> SentimentLabel:
    """Collapse the very_* grades into their plain polarity."""
    return _MERGE[FineSentimentLabel(label5)]


@dataclass(frozen=True)
class DialogueSummaryPair:
    """A dialogue with one or more summaries of the same origin."""

    id: str
    dialogue: str
    summaries: tuple[str, ...]
    origin: Origin = "reference"

    def __post_init__(self) -> None:
        if not self.id:
            raise RecordFormatError("pair id must be nonempty", code="empty_id")
        if not self.summaries:
            raise RecordFormatError("pair has no summaries", code="empty_summary", doc_id=self.id)
        for index, text in enumerate(self.summaries):
            if not text.strip():
                raise RecordFormatError(
                    f"summary {index} is empty", code="empty_summary", doc_id=self.id
                )


@dataclass(frozen=True)
class LabeledToken:
    """A word with its gold sentiment label."""

    text: str
    label: SentimentLabel

    def __post_init__(self) -> None:
        if not self.text or any(ch.isspace() for ch in self.text):
            raise RecordFormatError(f"invalid token text {self.text!r}", code="invalid_token")


@dataclass(frozen=True)
class LabeledSentenceCorpus:
    """Sentences of word-labeled tokens for one split."""

    sentences: tuple[tuple[LabeledToken, ...], ...]
    split: Split = "test"

    def __post_init__(self) -> None:
        for index, sentence in enumerate(self.sentences):
            if not sentence:
                raise RecordFormatError(
                    f"sentence {index} is empty", code="empty_sentence", line=index + 1
                )

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def n_tokens(self) -> int:
        return sum(len(sentence) for sentence in self.sentences)


# --- File input --------------------------------------------------------------


def read_text_lines(path: Path) -> list[str]:
    """
    Lines of a UTF-8 text file, without line endings.

    A file that cannot be opened or a line that is not valid UTF-8 raises
    RecordFormatError carrying the path (and the line number when decoding).
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise RecordFormatError(e.strerror or str(e), code="file_not_found", path=path) from e
    lines = []
    for line_number, chunk in enumerate(raw.splitlines(), start=1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise RecordFormatError(
                f"invalid UTF-8 at byte {e.start}", code="invalid_utf8", path=path, line=line_number
            ) from e
    return lines


# --- Pair files --------------------------------------------------------------


def parse_pairs(
    lines: Iterable[str],
    format: PairFormat = "simple",
    origin: Origin = "reference",
    source: Union[str, Path] = "<input>",
) -> list[DialogueSummaryPair]:
    """Parse pair records from an iterable of lines (blank lines are skipped)."""
    if format not in ("simple", "multi_reference"):
        raise RecordFormatError(f"unknown pair format {format!r}", code="invalid_format")

    pairs: list[DialogueSummaryPair] = []
    seen: dict[str, int] = {}
    fields = SUMMARY_FIELDS if format == "multi_reference" else SUMMARY_FIELDS[:1]

    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = PairRecord.model_validate_json(line)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first.get("loc", ())) or "record"
            raise RecordFormatError(
                f"{where}: {first.get('msg', 'invalid record')}", path=source, line=line_number
            ) from e

        summaries = []
        for field in fields:
            text = getattr(record, field)
            if text is None:
                continue
            if not text.strip():
                raise RecordFormatError(
                    f"field {field!r} is empty",
                    code="empty_summary",
                    path=source,
                    line=line_number,
                    doc_id=record.id,
                )
            summaries.append(text)

        if record.id in seen:
            raise DuplicateIdError(
                f"duplicate id {record.id!r} (first seen on line {seen[record.id]})",
                path=source,
                line=line_number,
                doc_id=record.id,
            )
        seen[record.id] = line_number
        pairs.append(
            DialogueSummaryPair(
                id=record.id,
                dialogue=record.dialogue,
                summaries=tuple(summaries),
                origin=origin,
            )
        )
    return pairs


def load_pairs(
    path: Path, format: PairFormat = "simple", origin: Origin = "reference"
) -> list[DialogueSummaryPair]:
    """
    Load dialogue-summary pairs from a line-delimited record file.

    Args:
        path: Pair file, one JSON record per line
        format: ``simple`` reads ``summary`` only; ``multi_reference`` also
            collects ``summary2`` and ``summary3``
        origin: Whether the summaries are references or system outputs

    Returns:
        Pairs in file order
    """
    path = Path(path)
    pairs = parse_pairs(read_text_lines(path), format=format, origin=origin, source=path)
    logger.info("[CORPUS] Loaded %d pairs (%s, %s) from %s", len(pairs), format, origin, path)
    return pairs


def dump_pairs(pairs: Iterable[DialogueSummaryPair], format: PairFormat = "simple") -> str:
    """Serialize pairs back to the record format, one JSON object per line."""
    lines = []
    for pair in pairs:
        record: dict[str, str] = {"id": pair.id, "dialogue": pair.dialogue}
        summaries = pair.summaries if format == "multi_reference" else pair.summaries[:1]
        for index, text in enumerate(summaries):
            record["summary" if index == 0 else f"summary{index + 1}"] = text
        lines.append(json.dumps(record, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


# --- Token-label files -------------------------------------------------------

_HEADERS = {"#labels=3": 3, "#labels=5": 5}


def _parse_label(raw: str, classes: int) -> SentimentLabel:
    if classes == 5:
        return merge_five_to_three(FineSentimentLabel(raw))
    return SentimentLabel(raw)


def _split_token(piece: str) -> tuple[str, str]:
    slash = piece.rfind("/")
    # the separator is the last slash that is not escaped
    while slash > 0 and piece[slash - 1] == "\\":
        slash = piece.rfind("/", 0, slash - 1)
    if slash <= 0:
        raise ValueError(f"token {piece!r} has no label")
    return piece[:slash].replace("\\/", "/"), piece[slash + 1 :]


def parse_labeled_corpus(
    lines: Iterable[str], split: Split = "test", source: Union[str, Path] = "<input>"
) -> LabeledSentenceCorpus:
    """Parse the token-label format (header line, then one sentence per line)."""
    iterator = iter(lines)
    header = next(iterator, "").strip()
    if header not in _HEADERS:
        raise RecordFormatError(
            f"expected '#labels=3' or '#labels=5' header, got {header!r}",
            code="missing_header",
            path=source,
            line=1,
        )
    classes = _HEADERS[header]

    sentences = []
    for line_number, line in enumerate(iterator, start=2):
        line = line.rstrip("\r\n")
        if not line.strip():
            raise RecordFormatError("empty sentence", code="empty_sentence", path=source, line=line_number)
        tokens = []
        for piece in line.split(" "):
            try:
                word, raw_label = _split_token(piece)
            except ValueError as e:
                raise RecordFormatError(str(e), path=source, line=line_number) from e
            try:
                label = _parse_label(raw_label, classes)
            except ValueError as e:
                raise UnknownLabelError(
                    f"unknown label {raw_label!r} for a {classes}-class file",
                    path=source,
                    line=line_number,
                ) from e
            tokens.append(LabeledToken(text=word, label=label))
        sentences.append(tuple(tokens))
    return LabeledSentenceCorpus(sentences=tuple(sentences), split=split)


def load_labeled_corpus(path: Path, split: Split = "test") -> LabeledSentenceCorpus:
    """
    Load a word-labeled sentiment corpus.

    Five-class files are merged to three classes on the way in.
    """
    path = Path(path)
    corpus = parse_labeled_corpus(read_text_lines(path), split=split, source=path)
    logger.info(
        "[CORPUS] Loaded %d sentences / %d tokens (%s) from %s",
        len(corpus),
        corpus.n_tokens,
        split,
        path,
    )
    return corpus


def _escape(word: str) -> str:
    return word.replace("/", "\\/")


def dump_labeled_corpus(corpus: LabeledSentenceCorpus) -> str:
    """Serialize a corpus in the three-class token-label format."""
    lines = ["#labels=3"]
    for sentence in corpus.sentences:
        lines.append(" ".join(f"{_escape(token.text)}/{token.label.value}" for token in sentence))
    return "\n".join(lines) + "\n"
