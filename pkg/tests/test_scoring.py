"""Tests for corpus-level scoring, filtering and distributions."""

import random

import pytest

from conftest import make_tagged
from psentscore.core.errors import ConfigError, InsufficientSamplesError
from psentscore.models.schemas import ScoreMetadata
from psentscore.services import stats
from psentscore.services.lexicon import TagSet, tag_corpus
from psentscore.services.reporting import to_json
from psentscore.services.scoring import (
    affect_distributions,
    build_score_report,
    distribution_summary,
    filter_corpus,
    rank_by_affect,
    score_corpus,
    subsample_corpus,
)


def random_codes(rng: random.Random, charged: bool = False) -> str:
    codes = "".join(rng.choice("pnooo") for _ in range(rng.randint(1, 12)))
    return codes + rng.choice("pn") if charged else codes


def metadata() -> ScoreMetadata:
    return ScoreMetadata(toolkit_version="test", tagger="fixture")


class TestScoreCorpus:
    """PSentScore over a tagged corpus."""

    def test_identity_corpus_is_perfect(self):
        """Summaries identical to their dialogues give perfect scores."""
        layout = {
            "d1": ("pooo", ["pooo"]),
            "d2": ("pnoo", ["pnoo"]),
            "d3": ("nnpo", ["nnpo"]),
            "d4": ("ppno", ["ppno"]),
            "d5": ("pono", ["pono"]),
        }
        pairs, tags = make_tagged(layout)
        for channel in ("all", "positive", "negative"):
            entry = score_corpus(pairs, tags, channel)
            assert entry.spearman == pytest.approx(1.0)
            assert entry.ccc == pytest.approx(1.0)
            assert entry.mae == 0.0

    def test_zero_dialogue_removed(self):
        """Dialogues without affect are left out of the sample."""
        rng = random.Random(21)
        layout = {f"d{i:03d}": (random_codes(rng, charged=True), [random_codes(rng)]) for i in range(499)}
        layout["zero"] = ("oooo", ["pooo"])
        pairs, tags = make_tagged(layout)
        entry = score_corpus(pairs, tags, "all")
        assert entry.n_used == 499
        assert entry.n_total == 500

    def test_matches_brute_force_recomputation(self):
        """Scores agree with statistics computed from hand-built ratios."""
        layout = {
            "a": ("po", ["pooo"]),
            "b": ("nooo", ["no"]),
            "c": ("ppno", ["ooo"]),
            "d": ("oooo", ["pp"]),
            "e": ("pnn", ["npoo"]),
            "f": ("poooo", ["poo"]),
        }
        pairs, tags = make_tagged(layout)

        def ratio(codes: str) -> float:
            return sum(code != "o" for code in codes) / len(codes)

        kept = [(ratio(d), ratio(s[0])) for d, s in layout.values() if ratio(d) != 0]
        series = stats.PairedSeries.of([x for x, _ in kept], [y for _, y in kept])
        entry = score_corpus(pairs, tags, "all")
        assert entry.n_used == 5
        assert entry.spearman == pytest.approx(stats.spearman(series), abs=1e-12)
        assert entry.ccc == pytest.approx(stats.ccc(series), abs=1e-12)
        assert entry.mae == pytest.approx(stats.mae(series), abs=1e-12)

    def test_insufficient_samples(self):
        """Fewer than two usable samples is an error."""
        pairs, tags = make_tagged({"d1": ("oo", ["p"]), "d2": ("po", ["p"])})
        with pytest.raises(InsufficientSamplesError) as exc:
            score_corpus(pairs, tags, "all")
        assert "insufficient samples after zero-filtering" in exc.value.message

    def test_removal_is_channel_local(self):
        """Zero filtering is decided per channel."""
        pairs, tags = make_tagged(
            {"d1": ("nno", ["no"]), "d2": ("poo", ["po"]), "d3": ("pno", ["pn"]), "d4": ("ppn", ["pon"])}
        )
        assert score_corpus(pairs, tags, "all").n_used == 4
        assert score_corpus(pairs, tags, "positive").n_used == 3
        assert score_corpus(pairs, tags, "negative").n_used == 3

    def test_each_policy_counts_every_reference(self):
        """The each policy contributes one sample per reference."""
        pairs, tags = make_tagged({"d1": ("po", ["p", "o", "po"]), "d2": ("ppo", ["pp", "oo", "o"])})
        assert score_corpus(pairs, tags, "all", "each").n_used == 6
        assert score_corpus(pairs, tags, "all", "mean").n_used == 2

    def test_workers_do_not_change_the_result(self, filter_pairs, lexicon):
        """Worker count does not affect the scores."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        assert score_corpus(filter_pairs, tags, workers=4) == score_corpus(filter_pairs, tags)


class TestBuildScoreReport:
    """Report assembly over all channels."""

    def test_failed_channel_is_recorded(self):
        """A channel that cannot be scored carries an error and no numbers."""
        pairs, tags = make_tagged({"d1": ("po", ["p"]), "d2": ("ppo", ["po"]), "d3": ("pooo", ["o"])})
        report = build_score_report(pairs, tags, metadata())
        assert report.channel("all").ok
        negative = report.channel("negative")
        assert not negative.ok
        assert negative.error.code == "insufficient_samples"
        assert negative.spearman is None
        assert negative.n_used == 0
        assert not report.ok

    def test_channel_order(self, filter_pairs, lexicon):
        """Channels appear as all, positive, negative."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        report = build_score_report(filter_pairs, tags, metadata())
        assert [entry.channel for entry in report.channels] == ["all", "positive", "negative"]

    def test_json_is_deterministic(self, filter_pairs, lexicon):
        """Two builds serialize to identical JSON."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        first = to_json(build_score_report(filter_pairs, tags, metadata()))
        second = to_json(build_score_report(filter_pairs, TagSet(tag_corpus(filter_pairs, lexicon)), metadata()))
        assert first == second


class TestFilterCorpus:
    """Affect-based corpus filtering."""

    def test_train_like(self, filter_pairs, lexicon):
        """Train-like mode drops pairs with zero affect on either side."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        kept, report = filter_corpus(filter_pairs, tags, "train_like")
        assert [pair.id for pair in kept] == ["f01", "f02", "f03", "f04", "f05", "f06"]
        assert report.kept == 6
        assert report.dropped_zero_dialogue == 1
        assert report.dropped_zero_summary == 3
        assert report.total == 10
        assert report.kept_fraction == pytest.approx(0.6)

    def test_test_like(self, filter_pairs, lexicon):
        """Test-like mode only drops zero-affect dialogues."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        kept, report = filter_corpus(filter_pairs, tags, "test_like")
        assert report.kept == 9
        assert report.dropped_zero_summary == 0
        assert "f10" not in {pair.id for pair in kept}

    def test_accounting(self, filter_pairs, lexicon):
        """Kept plus dropped always equals the total."""
        tags = TagSet(tag_corpus(filter_pairs, lexicon))
        for mode in ("train_like", "test_like"):
            _, report = filter_corpus(filter_pairs, tags, mode)
            assert report.kept + report.dropped_zero_dialogue + report.dropped_zero_summary == report.total

    def test_zero_on_both_sides_charged_to_dialogue(self):
        """A pair with no affect anywhere counts as a dialogue drop."""
        pairs, tags = make_tagged({"d1": ("oo", ["o"]), "d2": ("p", ["p"])})
        _, report = filter_corpus(pairs, tags, "train_like")
        assert report.dropped_zero_dialogue == 1
        assert report.dropped_zero_summary == 0

    def test_any_zero_reference_drops_the_pair(self):
        """One affect-free reference is enough to drop a pair."""
        pairs, tags = make_tagged({"d1": ("po", ["p", "o"])})
        kept, _ = filter_corpus(pairs, tags, "train_like")
        assert kept == []

    def test_empty_corpus(self):
        """An empty corpus keeps nothing and reports a zero fraction."""
        kept, report = filter_corpus([], TagSet(), "train_like")
        assert kept == []
        assert report.total == 0
        assert report.kept_fraction == 0.0


class TestDistributions:
    """Box-plot summaries."""

    def test_single_value(self):
        """One value collapses every statistic onto it."""
        summary = distribution_summary([0.5])
        assert (summary.median, summary.q1, summary.q3) == (0.5, 0.5, 0.5)
        assert (summary.whisker_low, summary.whisker_high) == (0.5, 0.5)
        assert summary.outliers == []

    def test_quartiles_by_linear_interpolation(self):
        """Quartiles interpolate between ranks."""
        summary = distribution_summary([1, 2, 3, 4, 5])
        assert (summary.median, summary.q1, summary.q3) == (3.0, 2.0, 4.0)
        assert (summary.whisker_low, summary.whisker_high) == (1.0, 5.0)
        assert summary.mean == 3.0

    def test_outlier(self):
        """Values beyond 1.5 IQR are listed as outliers."""
        summary = distribution_summary([0, 0, 0, 0, 10])
        assert summary.q1 == summary.q3 == 0.0
        assert summary.whisker_high == 0.0
        assert summary.outliers == [10.0]

    def test_whiskers_never_inside_the_box(self):
        """Whiskers always enclose the box."""
        rng = random.Random(31)
        for _ in range(100):
            values = [rng.random() for _ in range(rng.randint(1, 30))]
            summary = distribution_summary(values)
            assert summary.whisker_low <= summary.q1 <= summary.median <= summary.q3 <= summary.whisker_high

    def test_no_values(self):
        """An empty sample has no summary."""
        with pytest.raises(ValueError):
            distribution_summary([])

    def test_affect_distributions_full_and_filtered(self):
        """The filtered view keeps only samples charged on both sides."""
        pairs, tags = make_tagged(
            {"d1": ("po", ["p"]), "d2": ("oo", ["p"]), "d3": ("pooo", ["o"]), "d4": ("pp", ["po"])}
        )
        report = affect_distributions(pairs, tags)
        assert report.full.dialogue.n == 4
        assert report.filtered_n == 2
        assert report.filtered.summary.median == pytest.approx(0.75)

    def test_no_affect_at_all(self):
        """With no charged samples the filtered view is absent."""
        pairs, tags = make_tagged({"d1": ("oo", ["o"])})
        report = affect_distributions(pairs, tags)
        assert report.filtered is None
        assert report.filtered_n == 0


class TestCorpusUtilities:
    """Subsampling and affect ranking."""

    def test_subsample_is_seeded_and_ordered(self, filter_pairs):
        """The same seed picks the same pairs in input order."""
        first = subsample_corpus(filter_pairs, 4, seed=3)
        assert first == subsample_corpus(filter_pairs, 4, seed=3)
        positions = [filter_pairs.index(pair) for pair in first]
        assert positions == sorted(positions)
        assert len(first) == 4

    def test_subsample_size_bounds(self, filter_pairs):
        """The whole corpus is a valid sample and one more is not."""
        assert subsample_corpus(filter_pairs, 10) == filter_pairs
        with pytest.raises(ConfigError):
            subsample_corpus(filter_pairs, 11)

    def test_rank_by_affect(self):
        """Ranking is by descending ratio with ties in input order."""
        pairs, tags = make_tagged({"a": ("po", ["p"]), "b": ("pp", ["p"]), "c": ("oo", ["p"]), "d": ("on", ["p"])})
        ranked = rank_by_affect(pairs, tags, "all", top_k=3)
        assert [(pair.id, value) for pair, value in ranked] == [("b", 1.0), ("a", 0.5), ("d", 0.5)]
        assert [pair.id for pair, _ in rank_by_affect(pairs, tags, "negative")][0] == "d"
