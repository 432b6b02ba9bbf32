"""Word segmentation for dialogues and summaries.

Whitespace splitting, then punctuation stripped from both ends of each piece.
Pieces that are only punctuation vanish, and ``#PersonN#`` speaker markers
are dropped unless explicitly kept. Punctuation means Unicode category P;
symbols such as ``$`` or ``+`` are ordinary characters and a symbol-only
piece is a token. Case is preserved; lexicon lookup lowercases on its own.
"""

import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Sequence

from nltk.tokenize import WhitespaceTokenizer
from pydantic import ValidationError

from psentscore.core.errors import RecordFormatError
from psentscore.models.schemas import TokenRecord

SPEAKER_MARKER = re.compile(r"^#Person\d+#:?$")

_whitespace = WhitespaceTokenizer()


@dataclass(frozen=True)
class TokenStream:
    """Tokens of one text with their ``(start, end)`` character offsets."""

    tokens: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.spans):
            raise ValueError("tokens and spans differ in length")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @classmethod
    def from_tokens(cls, tokens: Sequence[str]) -> "TokenStream":
        """Wrap pre-segmented tokens, with spans as if joined by single spaces."""
        spans = []
        offset = 0
        for token in tokens:
            spans.append((offset, offset + len(token)))
            offset += len(token) + 1
        return cls(tokens=tuple(tokens), spans=tuple(spans))


def is_punctuation(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def _strip_punctuation(piece: str, start: int) -> tuple[str, int, int]:
    left = 0
    right = len(piece)
    while left < right and is_punctuation(piece[left]):
        left += 1
    while right > left and is_punctuation(piece[right - 1]):
        right -= 1
    return piece[left:right], start + left, start + right


def tokenize(text: str, keep_speaker_tokens: bool = False) -> TokenStream:
    """
    Segment text into word tokens.

    Args:
        text: Raw dialogue or summary text
        keep_speaker_tokens: Keep ``#PersonN#`` markers (without the colon)

    Returns:
        Token stream with character spans into ``text``
    """
    tokens = []
    spans = []
    for start, end in _whitespace.span_tokenize(text):
        piece = text[start:end]
        if SPEAKER_MARKER.match(piece):
            if keep_speaker_tokens:
                marker = piece.rstrip(":")
                tokens.append(marker)
                spans.append((start, start + len(marker)))
            continue
        word, word_start, word_end = _strip_punctuation(piece, start)
        if word:
            tokens.append(word)
            spans.append((word_start, word_end))
    return TokenStream(tokens=tuple(tokens), spans=tuple(spans))


def dump_token_streams(records: Iterable[tuple[str, str, TokenStream]]) -> str:
    """Serialize ``(doc_id, which, stream)`` triples for external taggers."""
    lines = []
    for doc_id, which, stream in records:
        record = TokenRecord(id=doc_id, which=which, tokens=list(stream.tokens), spans=list(stream.spans))
        lines.append(record.model_dump_json())
    return "".join(line + "\n" for line in lines)


def load_token_streams(lines: Iterable[str], source: str = "<input>") -> list[tuple[str, str, TokenStream]]:
    """Parse ``tokenize --emit`` output back into token streams."""
    result = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = TokenRecord.model_validate_json(line)
            stream = TokenStream(tokens=tuple(record.tokens), spans=tuple(record.spans))
        except (ValidationError, ValueError) as e:
            raise RecordFormatError(str(e).splitlines()[0], path=source, line=line_number) from e
        result.append((record.id, record.which, stream))
    return result
