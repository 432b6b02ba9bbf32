"""Agreement statistics between PSentDial and PSentSumm series.

Conventions: ranks are tie-averaged, variances are population (1/n).
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from psentscore.core.errors import StatisticsError

RANK_METHOD = "average"
VARIANCE_CONVENTION = "population"


@dataclass(frozen=True)
class PairedSeries:
    """Aligned dialogue-side (x) and summary-side (y) values."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise StatisticsError(
                f"series differ in length ({len(self.x)} vs {len(self.y)})", code="invalid_series"
            )
        if not all(math.isfinite(v) for v in (*self.x, *self.y)):
            raise StatisticsError("series contain non-finite values", code="invalid_series")

    @classmethod
    def of(cls, x: Sequence[float], y: Sequence[float]) -> "PairedSeries":
        return cls(tuple(float(v) for v in x), tuple(float(v) for v in y))

    @property
    def n(self) -> int:
        return len(self.x)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.x, dtype=float), np.asarray(self.y, dtype=float)


def _require(series: PairedSeries, minimum: int) -> None:
    if series.n < minimum:
        raise StatisticsError(
            f"need at least {minimum} samples, got {series.n}", code="invalid_series"
        )


def _is_constant(values: np.ndarray) -> bool:
    return bool(np.ptp(values) == 0)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return max(-1.0, min(1.0, r))


def pearson(series: PairedSeries) -> float:
    """Pearson correlation; undefined when either series is constant."""
    _require(series, 2)
    x, y = series.arrays()
    if _is_constant(x) or _is_constant(y):
        raise StatisticsError("undefined correlation (zero variance)", code="undefined_correlation")
    return _pearson(x, y)


def spearman(series: PairedSeries) -> float:
    """
    Spearman's rank correlation.

    Pearson correlation of tie-averaged ranks; identical to the
    ``1 - 6 sum(d^2) / (n (n^2 - 1))`` form whenever there are no ties.
    """
    _require(series, 2)
    x, y = series.arrays()
    if _is_constant(x) or _is_constant(y):
        raise StatisticsError(
            "undefined correlation (zero rank variance)", code="undefined_correlation"
        )
    return _pearson(rankdata(x, method=RANK_METHOD), rankdata(y, method=RANK_METHOD))


def closed_form_spearman(series: PairedSeries) -> float:
    """Textbook d-squared Spearman; only valid without ties."""
    _require(series, 2)
    x, y = series.arrays()
    if len(np.unique(x)) < series.n or len(np.unique(y)) < series.n:
        raise StatisticsError("closed-form Spearman requires tie-free data", code="invalid_series")
    d = rankdata(x) - rankdata(y)
    n = series.n
    return 1.0 - 6.0 * float(np.dot(d, d)) / (n * (n * n - 1))


def ccc(series: PairedSeries) -> float:
    """
    Concordance correlation coefficient with population moments.

    If exactly one side is constant the correlation term is undefined and the
    coefficient is 0; both sides constant and equal is an error.
    """
    _require(series, 2)
    x, y = series.arrays()
    mu_x, mu_y = x.mean(), y.mean()
    dx, dy = x - mu_x, y - mu_y
    # population moments through one code path, so y == x gives exactly 1
    var_x, var_y = float(np.mean(dx * dx)), float(np.mean(dy * dy))
    x_const, y_const = _is_constant(x), _is_constant(y)

    if x_const and y_const and x[0] == y[0]:
        raise StatisticsError("degenerate CCC (zero denominator)", code="degenerate_ccc")

    if x_const or y_const:
        return 0.0
    denominator = var_x + var_y + float(mu_x - mu_y) ** 2
    covariance = float(np.mean(dx * dy))
    return max(-1.0, min(1.0, 2.0 * covariance / denominator))


def mae(series: PairedSeries) -> float:
    """Mean absolute error."""
    _require(series, 1)
    x, y = series.arrays()
    return float(np.mean(np.abs(x - y)))
