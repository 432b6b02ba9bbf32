"""Word-level sentiment tagging: opinion-lexicon lookup and external tag files."""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from pydantic import ValidationError

from psentscore.core.config import Settings
from psentscore.core.errors import (
    AlignmentError,
    DuplicateIdError,
    LexiconError,
    MissingTagsError,
    RecordFormatError,
    UnknownDocumentError,
)
from psentscore.models.schemas import TagRecord
from psentscore.services.corpus import DialogueSummaryPair, SentimentLabel, read_text_lines
from psentscore.services.tokenizer import TokenStream, tokenize

logger = logging.getLogger(__name__)

DIALOGUE = "dialogue"
_WHICH = re.compile(r"^(dialogue|summary:(\d+))$")


def summary_key(index: int) -> str:
    return f"summary:{index}"


def canonical_which(which: str) -> str:
    """``summary:007`` -> ``summary:7``; other references are returned unchanged."""
    match = _WHICH.match(which)
    if match is None or match.group(2) is None:
        return which
    return summary_key(int(match.group(2)))


def document_keys(pair: DialogueSummaryPair) -> list[str]:
    """Every document of a pair: the dialogue, then each summary."""
    return [DIALOGUE] + [summary_key(k) for k in range(len(pair.summaries))]


def document_text(pair: DialogueSummaryPair, which: str) -> str:
    match = _WHICH.match(which)
    if match is None:
        raise UnknownDocumentError(f"invalid document reference {which!r}", doc_id=pair.id)
    if match.group(2) is None:
        return pair.dialogue
    index = int(match.group(2))
    if index >= len(pair.summaries):
        raise UnknownDocumentError(
            f"{which} does not exist (pair has {len(pair.summaries)} summaries)", doc_id=pair.id
        )
    return pair.summaries[index]


@dataclass(frozen=True)
class SentimentLexicon:
    """Disjoint positive/negative word sets, lowercase."""

    positive: frozenset[str]
    negative: frozenset[str]
    name: str = "lexicon"

    def __post_init__(self) -> None:
        overlap = self.positive & self.negative
        if overlap:
            raise LexiconError(
                f"words in both lists: {', '.join(sorted(overlap))}", code="lexicon_overlap"
            )

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)

    def label(self, word: str) -> SentimentLabel:
        key = word.lower()
        if key in self.positive:
            return SentimentLabel.POSITIVE
        if key in self.negative:
            return SentimentLabel.NEGATIVE
        return SentimentLabel.NEUTRAL


def _read_word_list(path: Path) -> list[str]:
    path = Path(path)
    if not path.exists():
        raise LexiconError("lexicon file not found", code="lexicon_missing", path=path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        # published opinion-lexicon files are latin-1
        text = path.read_text(encoding="latin-1")

    words = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        entry = line.strip()
        if not entry or entry.startswith(";"):
            continue
        if any(ch.isspace() for ch in entry):
            raise LexiconError(
                f"entry {entry!r} contains whitespace", code="lexicon_entry", path=path, line=line_number
            )
        words.append(entry.lower())
    return words


def build_lexicon(
    positive: Iterable[str],
    negative: Iterable[str],
    name: str = "lexicon",
    drop_overlap: bool = False,
) -> SentimentLexicon:
    """Validate and freeze two word lists into a lexicon."""
    pos = frozenset(word.lower() for word in positive)
    neg = frozenset(word.lower() for word in negative)
    if not pos and not neg:
        raise LexiconError("lexicon is empty", code="lexicon_empty")

    overlap = pos & neg
    if overlap and drop_overlap:
        logger.warning(
            "[LEXICON] Dropping %d words listed as both positive and negative: %s",
            len(overlap),
            ", ".join(sorted(overlap)),
        )
        pos, neg = pos - overlap, neg - overlap

    lexicon = SentimentLexicon(positive=pos, negative=neg, name=name)
    logger.info("[LEXICON] %s: %d positive, %d negative entries", name, len(pos), len(neg))
    return lexicon


def load_lexicon(pos_path: Path, neg_path: Path, drop_overlap: bool = False) -> SentimentLexicon:
    """
    Load an opinion lexicon from two word-list files.

    Args:
        pos_path: Positive words, one per line, ``;`` comments
        neg_path: Negative words, same layout
        drop_overlap: Remove words present in both lists instead of failing

    Returns:
        Lexicon with lowercased, deduplicated entries
    """
    positive = _read_word_list(pos_path)
    negative = _read_word_list(neg_path)
    name = f"lexicon:{Path(pos_path).name}+{Path(neg_path).name}"
    return build_lexicon(positive, negative, name=name, drop_overlap=drop_overlap)


def load_nltk_lexicon(drop_overlap: bool = False) -> SentimentLexicon:
    """Read the opinion lexicon shipped as NLTK data."""
    try:
        from nltk.corpus import opinion_lexicon

        positive = list(opinion_lexicon.positive())
        negative = list(opinion_lexicon.negative())
    except LookupError as e:
        raise LexiconError(
            "no lexicon configured and NLTK 'opinion_lexicon' data is not installed "
            "(pass --lexicon-pos/--lexicon-neg or set PSENT_LEXICON_DIR)",
            code="lexicon_missing",
        ) from e
    return build_lexicon(positive, negative, name="lexicon:nltk-opinion_lexicon", drop_overlap=drop_overlap)


def resolve_lexicon(
    pos_path: Optional[Path],
    neg_path: Optional[Path],
    settings: Settings,
    drop_overlap: bool = False,
) -> SentimentLexicon:
    """Explicit paths first, then ``PSENT_LEXICON_DIR``, then NLTK data."""
    if (pos_path is None) != (neg_path is None):
        raise LexiconError("--lexicon-pos and --lexicon-neg must be given together", code="lexicon_missing")
    if pos_path is not None and neg_path is not None:
        return load_lexicon(pos_path, neg_path, drop_overlap=drop_overlap)
    if settings.lexicon_paths is not None:
        return load_lexicon(*settings.lexicon_paths, drop_overlap=drop_overlap)
    return load_nltk_lexicon(drop_overlap=drop_overlap)


def tag_tokens(stream: Union[TokenStream, Sequence[str]], lexicon: SentimentLexicon) -> list[SentimentLabel]:
    """Context-free dictionary tagging, one label per token."""
    return [lexicon.label(token) for token in stream]


# --- Tag assignments ---------------------------------------------------------


@dataclass(frozen=True)
class TagAssignment:
    """Labels for one document (dialogue or summary) of one pair."""

    doc_id: str
    which: str
    labels: tuple[SentimentLabel, ...]


class TagSet:
    """Tag assignments indexed by ``(doc_id, which)``."""

    def __init__(self, assignments: Iterable[TagAssignment] = (), name: str = "tags"):
        self.name = name
        self._labels: dict[tuple[str, str], tuple[SentimentLabel, ...]] = {}
        for assignment in assignments:
            self.add(assignment)

    def add(self, assignment: TagAssignment) -> None:
        key = (assignment.doc_id, canonical_which(assignment.which))
        if key in self._labels:
            raise DuplicateIdError(
                f"duplicate tags for {assignment.which}", doc_id=assignment.doc_id
            )
        self._labels[key] = assignment.labels

    def get(self, doc_id: str, which: str) -> tuple[SentimentLabel, ...]:
        try:
            return self._labels[(doc_id, canonical_which(which))]
        except KeyError:
            raise MissingTagsError(f"no tag assignment for {which}", doc_id=doc_id) from None

    def __contains__(self, key: tuple[str, str]) -> bool:
        doc_id, which = key
        return (doc_id, canonical_which(which)) in self._labels

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[TagAssignment]:
        for (doc_id, which), labels in self._labels.items():
            yield TagAssignment(doc_id=doc_id, which=which, labels=labels)


def tag_corpus(
    pairs: Sequence[DialogueSummaryPair],
    lexicon: SentimentLexicon,
    keep_speaker_tokens: bool = False,
    workers: int = 1,
) -> list[TagAssignment]:
    """Tag every dialogue and summary of a corpus with the lexicon, in input order."""

    def tag_pair(pair: DialogueSummaryPair) -> list[TagAssignment]:
        return [
            TagAssignment(
                doc_id=pair.id,
                which=which,
                labels=tuple(tag_tokens(tokenize(document_text(pair, which), keep_speaker_tokens), lexicon)),
            )
            for which in document_keys(pair)
        ]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_pair = list(pool.map(tag_pair, pairs))
    else:
        per_pair = [tag_pair(pair) for pair in pairs]
    assignments = [assignment for group in per_pair for assignment in group]
    logger.info("[TAG] Tagged %d documents from %d pairs with %s", len(assignments), len(pairs), lexicon.name)
    return assignments


def dump_tags(assignments: Iterable[TagAssignment]) -> str:
    """Serialize assignments to the tag file format."""
    lines = []
    for assignment in assignments:
        record = TagRecord(
            id=assignment.doc_id,
            which=assignment.which,
            labels=[label.code for label in assignment.labels],
        )
        lines.append(record.model_dump_json())
    return "".join(line + "\n" for line in lines)


def parse_external_tags(
    lines: Iterable[str],
    corpus: Sequence[DialogueSummaryPair],
    keep_speaker_tokens: bool = False,
    source: Union[str, Path] = "<input>",
) -> list[TagAssignment]:
    """Parse tag records and check each against this toolkit's tokenization."""
    by_id = {pair.id: pair for pair in corpus}
    assignments = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = TagRecord.model_validate_json(line)
        except ValidationError as e:
            raise RecordFormatError(
                str(e.errors()[0].get("msg", "invalid tag record")), path=source, line=line_number
            ) from e

        pair = by_id.get(record.id)
        if pair is None:
            raise UnknownDocumentError(
                f"id {record.id!r} is not in the corpus", path=source, line=line_number, doc_id=record.id
            )
        which = canonical_which(record.which)
        try:
            text = document_text(pair, which)
        except UnknownDocumentError as e:
            e.path, e.line = str(source), line_number
            raise

        expected = len(tokenize(text, keep_speaker_tokens))
        if len(record.labels) != expected:
            raise AlignmentError(
                f"{which} has {expected} tokens but {len(record.labels)} labels",
                path=source,
                line=line_number,
                doc_id=record.id,
            )
        assignments.append(
            TagAssignment(
                doc_id=record.id,
                which=which,
                labels=tuple(SentimentLabel.from_code(code) for code in record.labels),
            )
        )
    return assignments


def load_external_tags(
    path: Path, corpus: Sequence[DialogueSummaryPair], keep_speaker_tokens: bool = False
) -> list[TagAssignment]:
    """
    Load labels produced by an out-of-band tagger.

    Every record must name a pair in ``corpus`` and carry exactly one label per
    token of the referenced document, as produced by ``tokenize``.
    """
    path = Path(path)
    assignments = parse_external_tags(
        read_text_lines(path), corpus, keep_speaker_tokens=keep_speaker_tokens, source=path
    )
    logger.info("[TAG] Loaded %d external tag assignments from %s", len(assignments), path)
    return assignments
