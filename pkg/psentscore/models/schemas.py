"""Pydantic schemas for records, reports and API responses."""

from typing import Literal, Optional

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator

Channel = Literal["all", "positive", "negative"]
SummaryPolicy = Literal["each", "mean"]


# --- Input records -----------------------------------------------------------


class PairRecord(BaseModel):
    """One line of a dialogue-summary pair file."""

    model_config = ConfigDict(extra="ignore")

    id: str = Field(..., validation_alias=AliasChoices("id", "fname"))
    dialogue: str
    summary: str
    summary2: Optional[str] = None
    summary3: Optional[str] = None

    @field_validator("id")
    @classmethod
    def _id_nonempty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("id must be nonempty")
        return value


class TagRecord(BaseModel):
    """One line of a tag file: labels for one document of one pair."""

    model_config = ConfigDict(extra="ignore")

    id: str
    which: str = Field(..., pattern=r"^(dialogue|summary:\d+)$")
    labels: list[Literal["p", "n", "o"]]


class TokenRecord(BaseModel):
    """One line of ``tokenize --emit`` output."""

    model_config = ConfigDict(extra="ignore")

    id: str
    which: str = Field(..., pattern=r"^(dialogue|summary:\d+)$")
    tokens: list[str]
    spans: list[tuple[int, int]]


# --- Reports -----------------------------------------------------------------


class ChannelError(BaseModel):
    """Why a channel has no statistics."""

    code: str
    message: str


class ScoreChannel(BaseModel):
    """PSentScore statistics for one polarity channel."""

    channel: Channel
    spearman: Optional[float] = None
    ccc: Optional[float] = None
    mae: Optional[float] = None
    n_used: int = Field(0, ge=0, description="Samples left after zero-PSentDial removal")
    n_total: int = Field(0, ge=0, description="Samples before zero-PSentDial removal")
    error: Optional[ChannelError] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class ScoreMetadata(BaseModel):
    """Conventions a ScoreReport was computed under."""

    toolkit_version: str
    tagger: str
    origin: Literal["reference", "generated"] = "reference"
    summary_policy: SummaryPolicy = "each"
    keep_speaker_tokens: bool = False
    variance_convention: str = "population"
    rank_ties: str = "average"
    quartile_method: str = "linear"
    stamp: Optional[str] = None
    extra: dict[str, str] = Field(default_factory=dict)


class ScoreReport(BaseModel):
    """PSentScore, PSentScore_P and PSentScore_N for one corpus."""

    metadata: ScoreMetadata
    channels: list[ScoreChannel]

    def channel(self, name: Channel) -> ScoreChannel:
        for entry in self.channels:
            if entry.channel == name:
                return entry
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(entry.ok for entry in self.channels)


class FilterReport(BaseModel):
    """Accounting of a corpus filtering run."""

    mode: Literal["train_like", "test_like"]
    kept: int = Field(..., ge=0)
    dropped_zero_dialogue: int = Field(..., ge=0)
    dropped_zero_summary: int = Field(..., ge=0)
    total: int = Field(..., ge=0)
    kept_fraction: float = Field(..., ge=0.0, le=1.0)


class DistributionSummary(BaseModel):
    """Box-plot statistics of one value series."""

    n: int
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    mean: float
    outliers: list[float] = Field(default_factory=list)


class DistributionPair(BaseModel):
    """Dialogue-side vs. summary-side distributions."""

    dialogue: DistributionSummary
    summary: DistributionSummary


class DistributionReport(BaseModel):
    """Full and filtered (no zero on either side) distributions for a channel."""

    channel: Channel
    summary_policy: SummaryPolicy
    full: DistributionPair
    filtered: Optional[DistributionPair] = None
    filtered_n: int = 0


class ClassMetrics(BaseModel):
    """Per-class precision/recall/F1 (percent)."""

    label: Literal["negative", "neutral", "positive"]
    precision: float
    recall: float
    f1: float
    support: int


class TaggerMetrics(BaseModel):
    """Token classification metrics (percent), macro-averaged over 3 classes."""

    tagger: str
    n_sentences: int
    n_tokens: int
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class: list[ClassMetrics]
    confusion: list[list[int]] = Field(
        ..., description="Rows gold, columns predicted; order negative, neutral, positive"
    )


# --- API ---------------------------------------------------------------------


class TokenizeRequest(BaseModel):
    """Request model for the tokenize endpoint."""

    text: str
    keep_speaker_tokens: bool = False


class TokenizeResponse(BaseModel):
    """Tokens with their character spans."""

    tokens: list[str]
    spans: list[tuple[int, int]]


class FilterResponse(BaseModel):
    """Response model for the filter endpoint."""

    report: FilterReport
    kept_ids: list[str]
