"""Exception hierarchy shared by every PSentScore module.

Each error carries a machine-readable ``code`` next to the human message so
that callers (the CLI, the HTTP layer, CI scripts) can branch on the failure
mode without parsing text.
"""

from pathlib import Path
from typing import Optional, Union


class PSentError(Exception):
    """Base class for toolkit errors."""

    code: str = "psent_error"

    def __init__(
        self,
        message: str,
        *,
        code: Optional[str] = None,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
        doc_id: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.path = str(path) if path is not None else None
        self.line = line
        self.doc_id = doc_id

    @property
    def context(self) -> str:
        """Location prefix such as ``pairs.jsonl:3`` or ``doc d1``."""
        parts = []
        if self.path is not None:
            parts.append(self.path if self.line is None else f"{self.path}:{self.line}")
        elif self.line is not None:
            parts.append(f"line {self.line}")
        if self.doc_id is not None:
            parts.append(f"doc {self.doc_id}")
        return " ".join(parts)

    def to_dict(self) -> dict[str, str]:
        detail = {"code": self.code, "message": self.message}
        if self.context:
            detail["context"] = self.context
        return detail

    def __str__(self) -> str:
        return f"{self.context}: {self.message}" if self.context else self.message


class RecordFormatError(PSentError):
    code = "malformed_record"


class DuplicateIdError(PSentError):
    code = "duplicate_id"


class UnknownLabelError(PSentError):
    code = "unknown_label"


class LexiconError(PSentError):
    code = "lexicon_error"


class AlignmentError(PSentError):
    code = "tag_alignment"


class UnknownDocumentError(PSentError):
    code = "unknown_document"


class MissingTagsError(PSentError):
    code = "missing_tags"


class EmptyDocumentError(PSentError):
    code = "empty_document"


class StatisticsError(PSentError):
    code = "statistics_error"


class InsufficientSamplesError(PSentError):
    code = "insufficient_samples"


class ConfigError(PSentError):
    code = "invalid_config"
