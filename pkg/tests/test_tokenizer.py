"""Unit tests for the word tokenizer."""

import random
import unicodedata

import pytest

from psentscore.services.tokenizer import (
    SPEAKER_MARKER,
    TokenStream,
    dump_token_streams,
    load_token_streams,
    tokenize,
)

SAMPLES = [
    "#Person1#: That's great ! #Person2#: Is it ?",
    "good, bad.",
    "Well... I'm (very) well-known -- really?!",
    "#Person1#: Hi .\n#Person2#: Hello , Mr. Smith !",
    "“Quoted” text with nbsp",
]


def oracle(text: str) -> list[str]:
    """Straightforward restatement of the segmentation rules."""
    result = []
    for piece in text.split():
        if SPEAKER_MARKER.match(piece):
            continue
        chars = list(piece)
        while chars and unicodedata.category(chars[0]).startswith("P"):
            chars.pop(0)
        while chars and unicodedata.category(chars[-1]).startswith("P"):
            chars.pop()
        if chars:
            result.append("".join(chars))
    return result


class TestTokenize:
    """Segmentation rules."""

    def test_empty_input(self):
        """Empty text gives an empty stream."""
        stream = tokenize("")
        assert stream.tokens == ()
        assert len(stream) == 0

    def test_speaker_markers_dropped(self):
        """Speaker markers are removed."""
        assert tokenize("#Person1#: That's great !").tokens == ("That's", "great")

    def test_punctuation_stripped(self):
        """Trailing punctuation is stripped."""
        assert tokenize("good, bad.").tokens == ("good", "bad")

    def test_intra_word_punctuation_kept(self):
        """Hyphens and apostrophes inside words stay."""
        assert tokenize("well-known isn't").tokens == ("well-known", "isn't")

    def test_case_preserved(self):
        """Tokens keep their case."""
        assert tokenize("GREAT Day").tokens == ("GREAT", "Day")

    def test_keep_speaker_tokens(self):
        """Markers are kept as tokens when asked."""
        stream = tokenize("#Person1#: Hi #Person2#", keep_speaker_tokens=True)
        assert stream.tokens == ("#Person1#", "Hi", "#Person2#")

    @pytest.mark.parametrize("text", SAMPLES)
    def test_matches_oracle(self, text):
        """Agrees with a direct restatement of the rules."""
        assert list(tokenize(text).tokens) == oracle(text)

    @pytest.mark.parametrize("text", SAMPLES)
    def test_spans_point_into_text(self, text):
        """Each span slices its token out of the input."""
        stream = tokenize(text)
        previous_end = -1
        for token, (start, end) in zip(stream.tokens, stream.spans):
            assert text[start:end] == token
            assert start > previous_end
            previous_end = end

    @pytest.mark.parametrize("text", SAMPLES)
    def test_idempotent(self, text):
        """Re-tokenizing joined tokens changes nothing."""
        tokens = tokenize(text).tokens
        assert tokenize(" ".join(tokens)).tokens == tokens

    def test_idempotent_with_kept_markers(self):
        """Idempotence also holds when markers are kept."""
        text = "#Person1#: Hello . #Person2#: Hi !"
        tokens = tokenize(text, keep_speaker_tokens=True).tokens
        assert tokenize(" ".join(tokens), keep_speaker_tokens=True).tokens == tokens

    def test_additive_over_concatenation(self):
        """Token counts add over space-joined texts."""
        rng = random.Random(7)
        for _ in range(50):
            a, b = rng.choice(SAMPLES), rng.choice(SAMPLES)
            assert len(tokenize(a + " " + b)) == len(tokenize(a)) + len(tokenize(b))

    def test_no_marker_or_punctuation_tokens(self):
        """No token is a marker, pure punctuation or contains whitespace."""
        for text in SAMPLES:
            for token in tokenize(text).tokens:
                assert not SPEAKER_MARKER.match(token)
                assert not all(unicodedata.category(ch).startswith("P") for ch in token)
                assert not any(ch.isspace() for ch in token)

    def test_symbols_are_tokens(self):
        """Currency and math symbols are not punctuation, so they stay as tokens."""
        stream = tokenize("It costs $ 20 + tax, (= $20).")
        assert stream.tokens == ("It", "costs", "$", "20", "+", "tax", "=", "$20")
        assert len(stream) == 8


class TestTokenStream:
    """Stream helpers and the emitted token format."""

    def test_from_tokens_spans(self):
        """Spans assume single spaces between tokens."""
        stream = TokenStream.from_tokens(["good", "and/or", "bad"])
        assert stream.spans == ((0, 4), (5, 11), (12, 15))

    def test_emit_round_trip(self):
        """Emitted records load back unchanged."""
        records = [("d1", "dialogue", tokenize(SAMPLES[0])), ("d1", "summary:0", tokenize("Fine ."))]
        parsed = load_token_streams(dump_token_streams(records).splitlines())
        assert parsed == records
