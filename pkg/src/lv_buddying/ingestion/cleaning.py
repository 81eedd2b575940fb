"""Replace missing, flagged and anomalous readings with the average load of similar hours.

"Similar hours" are the same half-hour slot of the same day type (weekday or weekend) over
the whole series. When a class has no valid donor the slot average over all days is used, and
failing that the series-wide average.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum

import numpy as np
import numpy.typing as npt

from lv_buddying.domain.series import SLOTS_PER_DAY, FloatArray, HalfHourlySeries
from lv_buddying.errors import InvalidInputError, UnrecoverableSeriesError

logger = logging.getLogger(__name__)

OUTLIER_FACTOR = 10.0
OUTLIER_PERCENTILE = 99.0


class Quality(str, Enum):
    OK = "ok"
    MISSING = "missing"
    OUTLIER = "outlier"


@dataclass(frozen=True, slots=True)
class FlaggedSeries:
    """Raw readings with a quality flag per slot; missing values may be NaN."""

    start_date: date
    values: FloatArray
    flags: npt.NDArray[np.str_]

    def __post_init__(self) -> None:
        if self.values.shape != self.flags.shape or self.values.ndim != 1:
            raise InvalidInputError("values and flags must be equal-length vectors")
        if self.values.size % SLOTS_PER_DAY != 0:
            raise InvalidInputError("raw series must span whole days")

    @classmethod
    def from_series(cls, series: HalfHourlySeries) -> FlaggedSeries:
        return cls(
            start_date=series.start_date,
            values=np.array(series.values),
            flags=np.full(len(series), Quality.OK.value),
        )

    def valid_mask(self) -> npt.NDArray[np.bool_]:
        return (self.flags == Quality.OK.value) & np.isfinite(self.values) & (self.values >= 0.0)


def weekend_days(start_date: date, days: int) -> npt.NDArray[np.bool_]:
    return np.array([(start_date + timedelta(days=d)).weekday() >= 5 for d in range(days)])


def outlier_threshold(values: FloatArray) -> float:
    """Readings above this are anomalous: ten times the 99th percentile of ``values``.

    The percentile is an order statistic (``method="lower"``), so on short series a single
    extreme reading cannot set its own threshold.
    """

    return float(OUTLIER_FACTOR * np.percentile(values, OUTLIER_PERCENTILE, method="lower"))


def _slot_means(matrix: FloatArray, valid: npt.NDArray[np.bool_]) -> FloatArray:
    sums = np.where(valid, matrix, 0.0).sum(axis=0)
    counts = valid.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def _impute(
    matrix: FloatArray, valid: npt.NDArray[np.bool_], weekend: npt.NDArray[np.bool_]
) -> FloatArray:
    overall_slot = _slot_means(matrix, valid)
    series_mean = float(matrix[valid].mean())
    fallback = np.where(np.isnan(overall_slot), series_mean, overall_slot)

    donors = np.empty((2, SLOTS_PER_DAY))
    for kind, mask in enumerate((~weekend, weekend)):
        class_means = (
            _slot_means(matrix[mask], valid[mask])
            if mask.any()
            else np.full(SLOTS_PER_DAY, np.nan)
        )
        donors[kind] = np.where(np.isnan(class_means), fallback, class_means)

    return np.where(valid, matrix, donors[weekend.astype(int)])


def clean_series(raw: FlaggedSeries) -> HalfHourlySeries:
    """Impute every invalid slot; slots flagged ok and under the outlier threshold are kept.

    The threshold is taken over the imputed series and the outlier pass repeats until no
    further reading exceeds it, so cleaning a cleaned series returns it unchanged. Each pass
    only lowers values, so the threshold never rises between passes.
    """

    values = np.array(raw.values, dtype=np.float64)
    valid = raw.valid_mask()
    if not valid.any():
        raise UnrecoverableSeriesError(
            f"series starting {raw.start_date} has no valid reading to impute from"
        )

    days = values.size // SLOTS_PER_DAY
    matrix = values.reshape(days, SLOTS_PER_DAY)
    valid_matrix = valid.reshape(days, SLOTS_PER_DAY)
    weekend = weekend_days(raw.start_date, days)

    cleaned = _impute(matrix, valid_matrix, weekend)
    passes = 1
    while True:
        threshold = outlier_threshold(cleaned)
        if threshold <= 0.0:
            break
        over = valid_matrix & (cleaned > threshold)
        if not over.any():
            break
        valid_matrix = valid_matrix & ~over
        cleaned = _impute(matrix, valid_matrix, weekend)
        passes += 1

    n_replaced = int((~valid_matrix).sum())
    if n_replaced:
        logger.debug(
            "Imputed readings",
            extra={
                "start_date": raw.start_date,
                "replaced": n_replaced,
                "slots": values.size,
                "passes": passes,
            },
        )
    return HalfHourlySeries(start_date=raw.start_date, values=cleaned.ravel())
