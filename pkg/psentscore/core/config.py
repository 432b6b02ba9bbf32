"""Core configuration for PSentScore."""

from pathlib import Path
from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from psentscore import __version__


class Settings(BaseSettings):
    """Toolkit settings, overridable through ``PSENT_*`` environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="PSENT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # App Info
    app_name: str = "PSentScore"
    version: str = __version__
    debug: bool = False
    log_level: str = "INFO"

    # Lexicon
    lexicon_dir: Optional[Path] = None
    lexicon_pos_name: str = "positive-words.txt"
    lexicon_neg_name: str = "negative-words.txt"

    # Processing
    workers: int = 1
    summary_policy: Literal["each", "mean"] = "each"
    keep_speaker_tokens: bool = False

    # Server
    host: str = "0.0.0.0"
    port: int = 8000
    max_upload_mb: int = 50

    @property
    def lexicon_paths(self) -> Optional[tuple[Path, Path]]:
        """Positive/negative word-list paths under ``lexicon_dir``, if configured."""
        if self.lexicon_dir is None:
            return None
        return (
            self.lexicon_dir / self.lexicon_pos_name,
            self.lexicon_dir / self.lexicon_neg_name,
        )

    @property
    def max_upload_bytes(self) -> int:
        """Convert MB to bytes."""
        return self.max_upload_mb * 1024 * 1024


settings = Settings()
