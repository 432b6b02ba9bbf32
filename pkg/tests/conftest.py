"""Shared fixtures."""

from pathlib import Path

import pytest

from psentscore.services.corpus import DialogueSummaryPair, SentimentLabel, load_pairs
from psentscore.services.lexicon import DIALOGUE, TagAssignment, TagSet, load_lexicon, summary_key

DATA_DIR = Path(__file__).parent / "data"


def labels(codes: str) -> tuple[SentimentLabel, ...]:
    """``"ppo"`` -> (positive, positive, neutral)."""
    return tuple(SentimentLabel.from_code(code) for code in codes)


def make_tagged(layout: dict[str, tuple[str, list[str]]]) -> tuple[list[DialogueSummaryPair], TagSet]:
    """
    Build pairs and tags from label codes.

    ``{"d1": ("ppoo", ["po"])}`` gives a pair whose dialogue has four tokens
    and one summary with two; the texts are placeholders of matching length.
    """
    pairs = []
    assignments = []
    for doc_id, (dialogue_codes, summary_codes) in layout.items():
        pairs.append(
            DialogueSummaryPair(
                id=doc_id,
                dialogue=" ".join(["w"] * len(dialogue_codes)),
                summaries=tuple(" ".join(["w"] * len(codes)) or "w" for codes in summary_codes),
            )
        )
        assignments.append(TagAssignment(doc_id, DIALOGUE, labels(dialogue_codes)))
        for k, codes in enumerate(summary_codes):
            assignments.append(TagAssignment(doc_id, summary_key(k), labels(codes)))
    return pairs, TagSet(assignments)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def lexicon():
    return load_lexicon(DATA_DIR / "positive-words.txt", DATA_DIR / "negative-words.txt")


@pytest.fixture
def filter_pairs():
    return load_pairs(DATA_DIR / "filter_pairs.jsonl")


@pytest.fixture
def write_lines(tmp_path):
    """Write lines to a file under tmp_path and return its path."""

    def _write(name: str, lines: list[str]) -> Path:
        path = tmp_path / name
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    return _write
