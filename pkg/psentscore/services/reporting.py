"""Report output: atomic file writes, CSV rendering and report tables."""

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from psentscore.core.errors import RecordFormatError
from psentscore.models.schemas import ScoreReport
from psentscore.services.corpus import read_text_lines


def atomic_write(path: Path, text: str) -> Path:
    """Write ``text`` to a temp file beside ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    return path


def to_json(model) -> str:
    return model.model_dump_json(indent=2) + "\n"


def _cell(value: Optional[float]) -> str:
    return "" if value is None else repr(value)


def score_report_csv(report: ScoreReport) -> str:
    """One row per channel in Spearman, CCC, MAE order, then caller-supplied columns."""
    extra_keys = sorted(report.metadata.extra)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["channel", "spearman", "ccc", "mae", "n_used", "error", *extra_keys])
    for entry in report.channels:
        writer.writerow(
            [
                entry.channel,
                _cell(entry.spearman),
                _cell(entry.ccc),
                _cell(entry.mae),
                entry.n_used,
                entry.error.code if entry.error else "",
                *(report.metadata.extra[key] for key in extra_keys),
            ]
        )
    return buffer.getvalue()


def load_score_report(path: Path) -> ScoreReport:
    """Parse a ScoreReport written by ``score``."""
    path = Path(path)
    text = "\n".join(read_text_lines(path))
    try:
        return ScoreReport.model_validate_json(text)
    except ValidationError as e:
        raise RecordFormatError(f"not a score report: {e.errors()[0]['msg']}", path=path) from e


def _triple(report: ScoreReport, channel: str) -> str:
    try:
        entry = report.channel(channel)  # type: ignore[arg-type]
    except KeyError:
        return ""
    if not entry.ok:
        return f"error:{entry.error.code}"  # type: ignore[union-attr]
    return f"{entry.spearman:.3f}/{entry.ccc:.3f}/{entry.mae:.3f}"


def combine_reports(reports: Sequence[ScoreReport], names: Sequence[str]) -> str:
    """
    Side-by-side table, one row per system.

    Each channel column holds ``spearman/ccc/mae`` rounded to three decimals;
    extra columns from all reports follow, blank where a report lacks them.
    """
    if len(reports) != len(names):
        raise ValueError("one name per report required")
    extra_keys = sorted({key for report in reports for key in report.metadata.extra})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["system", *extra_keys, "n_used", "psentscore", "psentscore_p", "psentscore_n"])
    for name, report in zip(names, reports):
        try:
            n_used = str(report.channel("all").n_used)
        except KeyError:
            n_used = ""
        writer.writerow(
            [
                name,
                *(report.metadata.extra.get(key, "") for key in extra_keys),
                n_used,
                _triple(report, "all"),
                _triple(report, "positive"),
                _triple(report, "negative"),
            ]
        )
    return buffer.getvalue()
