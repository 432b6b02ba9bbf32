"""Command-line interface: ``python -m psentscore <subcommand>``."""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from psentscore import __version__
from psentscore.core.config import Settings, settings as default_settings
from psentscore.core.errors import ConfigError, PSentError
from psentscore.core.logging import configure_logging
from psentscore.models.schemas import ScoreMetadata
from psentscore.services import corpus as corpus_service
from psentscore.services import reporting, scoring, stats, tagger_eval
from psentscore.services.lexicon import (
    TagSet,
    document_keys,
    document_text,
    dump_tags,
    load_external_tags,
    resolve_lexicon,
    tag_corpus,
)
from psentscore.services.psent import CHANNELS
from psentscore.services.tokenizer import dump_token_streams, tokenize

logger = logging.getLogger("psentscore.cli")

CHANNEL_FLAGS = {"all": "all", "pos": "positive", "neg": "negative"}
TAGGED_COMMANDS = {"score", "filter", "stats", "top"}
LEXICON_ONLY_COMMANDS = {"tag"}


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    subcommand: str
    pairs: Optional[Path] = None
    format: str = "simple"
    origin: str = "reference"
    lexicon_pos: Optional[Path] = None
    lexicon_neg: Optional[Path] = None
    tags: Optional[Path] = None
    channels: tuple[str, ...] = CHANNELS
    summary_policy: str = "each"
    mode: str = "train_like"
    keep_speaker_tokens: bool = False
    drop_overlap: bool = False
    csv: bool = False
    emit: bool = False
    stamp: bool = False
    extra: dict[str, str] = field(default_factory=dict)
    out: Optional[Path] = None
    report_out: Optional[Path] = None
    gold: Optional[Path] = None
    predictions: Optional[Path] = None
    predictions_out: Optional[Path] = None
    reports: tuple[Path, ...] = ()
    names: tuple[str, ...] = ()
    size: Optional[int] = None
    seed: int = 0
    k: Optional[int] = None
    workers: int = 1

    @property
    def uses_lexicon(self) -> bool:
        return self.lexicon_pos is not None or self.lexicon_neg is not None

    def validate(self) -> None:
        """Check flag combinations that argparse cannot express."""
        needs_pairs = self.subcommand in TAGGED_COMMANDS | LEXICON_ONLY_COMMANDS | {"tokenize", "subsample"}
        if needs_pairs and self.pairs is None:
            raise ConfigError(f"{self.subcommand} requires --pairs")
        if self.tags is not None and self.uses_lexicon:
            raise ConfigError("choose one tag source: --tags or --lexicon-pos/--lexicon-neg")
        if self.tags is not None and self.subcommand not in TAGGED_COMMANDS:
            raise ConfigError(f"{self.subcommand} does not accept --tags")
        if self.subcommand == "filter" and self.out is None:
            raise ConfigError("filter requires --out for the kept pairs")
        if self.subcommand == "subsample" and (self.size is None or self.size < 0):
            raise ConfigError("subsample requires a non-negative --size")
        if self.subcommand == "eval-tagger":
            if self.gold is None:
                raise ConfigError("eval-tagger requires --gold")
            if self.predictions is not None and self.uses_lexicon:
                raise ConfigError("choose one tag source: --predictions or --lexicon-pos/--lexicon-neg")
        if self.subcommand == "report":
            if not self.reports:
                raise ConfigError("report requires at least one --reports file")
            if self.names and len(self.names) != len(self.reports):
                raise ConfigError("--names must match --reports one to one")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")


def _write(config: RunConfig, text: str, path: Optional[Path] = None) -> None:
    target = path if path is not None else config.out
    if target is None:
        sys.stdout.write(text)
    else:
        reporting.atomic_write(target, text)
        logger.info("[OUTPUT] Wrote %s", target)


def _load_pairs(config: RunConfig) -> list[corpus_service.DialogueSummaryPair]:
    return corpus_service.load_pairs(config.pairs, format=config.format, origin=config.origin)


def _lexicon(config: RunConfig, settings: Settings):
    return resolve_lexicon(config.lexicon_pos, config.lexicon_neg, settings, drop_overlap=config.drop_overlap)


def _tag_set(config: RunConfig, pairs, settings: Settings) -> TagSet:
    if config.tags is not None:
        assignments = load_external_tags(config.tags, pairs, keep_speaker_tokens=config.keep_speaker_tokens)
        return TagSet(assignments, name=f"external:{config.tags.name}")
    lexicon = _lexicon(config, settings)
    assignments = tag_corpus(pairs, lexicon, config.keep_speaker_tokens, config.workers)
    return TagSet(assignments, name=lexicon.name)


def _cmd_tokenize(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    records = [
        (pair.id, which, tokenize(document_text(pair, which), config.keep_speaker_tokens))
        for pair in pairs
        for which in document_keys(pair)
    ]
    if config.emit:
        _write(config, dump_token_streams(records))
    else:
        _write(config, "".join(f"{doc_id}\t{which}\t{' '.join(stream.tokens)}\n" for doc_id, which, stream in records))
    return 0


def _cmd_tag(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    assignments = tag_corpus(pairs, _lexicon(config, settings), config.keep_speaker_tokens, config.workers)
    _write(config, dump_tags(assignments))
    return 0


def _cmd_score(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    tags = _tag_set(config, pairs, settings)
    metadata = ScoreMetadata(
        toolkit_version=__version__,
        tagger=tags.name,
        origin=config.origin,
        # one generated summary per dialogue: the policy is moot
        summary_policy="each" if config.origin == "generated" else config.summary_policy,
        keep_speaker_tokens=config.keep_speaker_tokens,
        rank_ties=stats.RANK_METHOD,
        variance_convention=stats.VARIANCE_CONVENTION,
        quartile_method=scoring.QUARTILE_METHOD,
        stamp=datetime.now(timezone.utc).isoformat(timespec="seconds") if config.stamp else None,
        extra=dict(sorted(config.extra.items())),
    )
    report = scoring.build_score_report(pairs, tags, metadata, config.channels, config.workers)
    _write(config, reporting.score_report_csv(report) if config.csv else reporting.to_json(report))
    if not report.ok:
        failed = [entry for entry in report.channels if not entry.ok]
        for entry in failed:
            logger.error("error[%s]: channel %s: %s", entry.error.code, entry.channel, entry.error.message)
        return 1
    return 0


def _cmd_filter(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    tags = _tag_set(config, pairs, settings)
    kept, report = scoring.filter_corpus(pairs, tags, config.mode)
    report_path = config.report_out or config.out.with_name(config.out.name + ".report.json")
    pairs_text = corpus_service.dump_pairs(kept, config.format)
    report_text = reporting.to_json(report)
    _write(config, pairs_text)
    try:
        _write(config, report_text, report_path)
    except BaseException:
        # kept pairs without their report are a partial output
        config.out.unlink(missing_ok=True)
        raise
    return 0


def _cmd_stats(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    tags = _tag_set(config, pairs, settings)
    report = scoring.affect_distributions(pairs, tags, config.channels[0], config.summary_policy, config.workers)
    _write(config, reporting.to_json(report))
    return 0


def _cmd_top(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    tags = _tag_set(config, pairs, settings)
    ranked = scoring.rank_by_affect(pairs, tags, config.channels[0], config.k)
    lines = [
        json.dumps({"id": pair.id, "channel": config.channels[0], "psent_dialogue": value})
        for pair, value in ranked
    ]
    _write(config, "".join(line + "\n" for line in lines))
    return 0


def _cmd_subsample(config: RunConfig, settings: Settings) -> int:
    pairs = _load_pairs(config)
    sample = scoring.subsample_corpus(pairs, config.size, config.seed)
    logger.info("[SUBSAMPLE] %d of %d pairs (seed %d)", len(sample), len(pairs), config.seed)
    _write(config, corpus_service.dump_pairs(sample, config.format))
    return 0


def _cmd_eval_tagger(config: RunConfig, settings: Settings) -> int:
    gold = corpus_service.load_labeled_corpus(config.gold)
    if config.predictions is not None:
        predicted_corpus = corpus_service.load_labeled_corpus(config.predictions)
        predictions = [[token.label for token in sentence] for sentence in predicted_corpus.sentences]
        tagger = f"external:{config.predictions.name}"
    else:
        lexicon = _lexicon(config, settings)
        predictions = tagger_eval.lexicon_predictions(gold, lexicon)
        tagger = lexicon.name
        if config.predictions_out is not None:
            predicted_corpus = corpus_service.LabeledSentenceCorpus(
                sentences=tuple(
                    tuple(
                        corpus_service.LabeledToken(text=token.text, label=label)
                        for token, label in zip(sentence, labels)
                    )
                    for sentence, labels in zip(gold.sentences, predictions)
                ),
                split=gold.split,
            )
            _write(config, corpus_service.dump_labeled_corpus(predicted_corpus), config.predictions_out)
    metrics = tagger_eval.evaluate_tagger(gold, predictions, tagger=tagger)
    _write(config, tagger_eval.metrics_csv(metrics) if config.csv else reporting.to_json(metrics))
    return 0


def _cmd_report(config: RunConfig, settings: Settings) -> int:
    reports = [reporting.load_score_report(path) for path in config.reports]
    names = config.names or tuple(path.stem for path in config.reports)
    _write(config, reporting.combine_reports(reports, names))
    return 0


COMMANDS = {
    "tokenize": _cmd_tokenize,
    "tag": _cmd_tag,
    "score": _cmd_score,
    "filter": _cmd_filter,
    "stats": _cmd_stats,
    "eval-tagger": _cmd_eval_tagger,
    "report": _cmd_report,
    "subsample": _cmd_subsample,
    "top": _cmd_top,
}


def run(config: RunConfig, settings: Settings = default_settings) -> int:
    """Execute one subcommand; returns the process exit status."""
    config.validate()
    return COMMANDS[config.subcommand](config, settings)


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key, value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pairs", type=Path, help="Dialogue-summary pair file (one JSON record per line)")
    common.add_argument("--format", choices=["simple", "multi-reference"], default="simple")
    common.add_argument("--origin", choices=["reference", "generated"], default="reference")
    common.add_argument("--lexicon-pos", type=Path)
    common.add_argument("--lexicon-neg", type=Path)
    common.add_argument("--drop-overlap", action="store_true", help="Drop words listed in both lexicon files")
    common.add_argument("--keep-speaker-tokens", action="store_true", default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--out", type=Path, help="Output path (default: stdout)")
    common.add_argument("--log-level", default=None)

    tagged = argparse.ArgumentParser(add_help=False)
    tagged.add_argument("--tags", type=Path, help="External tag file instead of the lexicon")
    tagged.add_argument("--summary-policy", choices=["each", "mean"], default=None)

    parser = argparse.ArgumentParser(prog="psent", description="Affective-content preservation measures")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("tokenize", parents=[common], help="Emit token streams for external taggers")
    p.add_argument("--emit", action="store_true", help="Write JSON token records with spans")

    sub.add_parser("tag", parents=[common], help="Write a tag file using the lexicon")

    p = sub.add_parser("score", parents=[common, tagged], help="Compute PSentScore")
    p.add_argument("--channel", choices=list(CHANNEL_FLAGS), action="append")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--stamp", action="store_true", help="Record a UTC timestamp in the report")
    p.add_argument("--extra", type=_key_value, action="append", default=[], metavar="KEY=VALUE")

    p = sub.add_parser("filter", parents=[common, tagged], help="Drop pairs without affective content")
    p.add_argument("--mode", choices=["train-like", "test-like"], default="train-like")
    p.add_argument("--report-out", type=Path)

    p = sub.add_parser("stats", parents=[common, tagged], help="PSentDial/PSentSumm distribution summaries")
    p.add_argument("--channel", choices=list(CHANNEL_FLAGS), default="all")

    p = sub.add_parser("top", parents=[common, tagged], help="Pairs with the most affective dialogues")
    p.add_argument("--channel", choices=list(CHANNEL_FLAGS), default="all")
    p.add_argument("--k", type=int, default=10)

    p = sub.add_parser("subsample", parents=[common], help="Seeded random sample of a corpus")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval-tagger", parents=[common], help="Token-level tagger metrics")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--predictions", type=Path)
    p.add_argument("--predictions-out", type=Path)
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("report", parents=[common], help="Combine score reports into one table")
    p.add_argument("--reports", type=Path, nargs="+", required=True)
    p.add_argument("--names", nargs="+")

    return parser


def config_from_args(args: argparse.Namespace, settings: Settings = default_settings) -> RunConfig:
    channel = getattr(args, "channel", None)
    if isinstance(channel, list):
        channels = tuple(dict.fromkeys(CHANNEL_FLAGS[c] for c in channel))
    elif channel is not None:
        channels = (CHANNEL_FLAGS[channel],)
    else:
        channels = CHANNELS

    keep = args.keep_speaker_tokens if args.keep_speaker_tokens is not None else settings.keep_speaker_tokens
    policy = getattr(args, "summary_policy", None) or settings.summary_policy
    return RunConfig(
        subcommand=args.subcommand,
        pairs=args.pairs,
        format=args.format.replace("-", "_"),
        origin=args.origin,
        lexicon_pos=args.lexicon_pos,
        lexicon_neg=args.lexicon_neg,
        tags=getattr(args, "tags", None),
        channels=channels,
        summary_policy=policy,
        mode=getattr(args, "mode", "train-like").replace("-", "_"),
        keep_speaker_tokens=keep,
        drop_overlap=args.drop_overlap,
        csv=getattr(args, "csv", False),
        emit=getattr(args, "emit", False),
        stamp=getattr(args, "stamp", False),
        extra=dict(getattr(args, "extra", [])),
        out=args.out,
        report_out=getattr(args, "report_out", None),
        gold=getattr(args, "gold", None),
        predictions=getattr(args, "predictions", None),
        predictions_out=getattr(args, "predictions_out", None),
        reports=tuple(getattr(args, "reports", None) or ()),
        names=tuple(getattr(args, "names", None) or ()),
        size=getattr(args, "size", None),
        seed=getattr(args, "seed", 0),
        k=getattr(args, "k", None),
        workers=args.workers if args.workers is not None else settings.workers,
    )


def main(argv: Optional[Sequence[str]] = None, settings: Settings = default_settings) -> int:
    """Entry point; maps toolkit errors to exit status 1 with a coded diagnostic."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level)
    try:
        return run(config_from_args(args, settings), settings)
    except PSentError as e:
        context = f"{e.context}: " if e.context else ""
        logger.error("error[%s]: %s%s", e.code, context, e.message)
        return 1
    except OSError as e:
        logger.error("error[io_error]: %s: %s", e.filename or "<output>", e.strerror or e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
