"""Half-hourly energy series and the derived quantities every module shares."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np
import numpy.typing as npt

from lv_buddying.errors import AlignmentError, InvalidInputError, WindowRangeError

SLOTS_PER_DAY = 48
DAYS_PER_WEEK = 7
SLOTS_PER_WEEK = SLOTS_PER_DAY * DAYS_PER_WEEK

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class HalfHourlySeries:
    """Energy readings in kWh per half-hour slot, starting at midnight of ``start_date``.

    Slots are positional: slot ``k`` (0-based) belongs to day ``k // 48``. The stored array is
    read-only so instances can be shared between workers.
    """

    start_date: date
    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 1:
            raise InvalidInputError("series values must be one-dimensional")
        if values.size % SLOTS_PER_DAY != 0:
            raise InvalidInputError(
                f"series length {values.size} is not a whole number of days"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("series values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, start_date: date, length: int) -> HalfHourlySeries:
        return cls(start_date=start_date, values=np.zeros(length))

    @property
    def days(self) -> int:
        return self.values.size // SLOTS_PER_DAY

    @property
    def end_date(self) -> date:
        """Last calendar day covered (inclusive)."""

        return self.start_date + timedelta(days=self.days - 1)

    def __len__(self) -> int:
        return int(self.values.size)

    def day_matrix(self) -> FloatArray:
        """View the series as a (days, 48) matrix."""

        return self.values.reshape(self.days, SLOTS_PER_DAY)

    def covers(self, start: date, end: date) -> bool:
        return self.days > 0 and self.start_date <= start and end <= self.end_date

    def offset_of(self, day: date) -> int:
        """Slot index of midnight on ``day``."""

        return (day - self.start_date).days * SLOTS_PER_DAY


def mean_daily_demand(series: HalfHourlySeries) -> float:
    """Average kWh per day over the whole series."""

    if len(series) == 0:
        raise InvalidInputError("mean daily demand of an empty series is undefined")
    return float(series.values.sum() / series.days)


def aggregate(
    series_list: Sequence[HalfHourlySeries],
    *,
    start_date: date | None = None,
    length: int | None = None,
) -> HalfHourlySeries:
    """Slot-wise sum of series sharing one time axis.

    An empty list needs ``start_date`` and ``length`` to describe the zero series it sums to.
    """

    if not series_list:
        if start_date is None or length is None:
            raise InvalidInputError("aggregating no series needs start_date and length")
        return HalfHourlySeries.zeros(start_date, length)

    first = series_list[0]
    expected_start = first.start_date if start_date is None else start_date
    expected_length = len(first) if length is None else length
    for series in series_list:
        if len(series) != expected_length or series.start_date != expected_start:
            raise AlignmentError(
                f"cannot aggregate series of length {len(series)} from {series.start_date} "
                f"with series of length {expected_length} from {expected_start}"
            )

    total = np.sum(np.stack([s.values for s in series_list]), axis=0)
    return HalfHourlySeries(start_date=expected_start, values=total)


def slice_days(series: HalfHourlySeries, start: date, end: date) -> HalfHourlySeries:
    """Inclusive calendar-day slice ``[start, end]``."""

    if end < start:
        raise WindowRangeError(f"window end {end} precedes start {start}")
    if not series.covers(start, end):
        raise WindowRangeError(
            f"window {start}..{end} is outside series {series.start_date}..{series.end_date}"
        )
    lo = series.offset_of(start)
    hi = series.offset_of(end) + SLOTS_PER_DAY
    return HalfHourlySeries(start_date=start, values=series.values[lo:hi])


def window(series: HalfHourlySeries, start_date: date, n_weeks: int) -> HalfHourlySeries:
    """Training slice of ``n_weeks`` whole weeks from ``start_date``."""

    if n_weeks < 1:
        raise WindowRangeError(f"a training window needs at least one week, got {n_weeks}")
    end = start_date + timedelta(days=n_weeks * DAYS_PER_WEEK - 1)
    return slice_days(series, start_date, end)
