"""Accuracy of a modelled aggregate against measured readings.

Both measures take the measured series first::

    rmae(s, a) = Σ_t |a(t) − s(t)| / (H · S)        S = Σ_t s(t), H = number of slots
    rpde(s, a) = (max_t s(t) − max_t a(t)) / max_t s(t)

A positive RPDE means the model underestimates the peak.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from lv_buddying.domain.series import FloatArray, HalfHourlySeries
from lv_buddying.errors import AlignmentError, DegenerateNormalizationError

SeriesLike = HalfHourlySeries | npt.ArrayLike


def _values(series: SeriesLike) -> FloatArray:
    if isinstance(series, HalfHourlySeries):
        return series.values
    return np.asarray(series, dtype=float).ravel()


def _pair(actual: SeriesLike, modeled: SeriesLike) -> tuple[FloatArray, FloatArray]:
    s = _values(actual)
    a = _values(modeled)
    if s.shape != a.shape:
        raise AlignmentError(f"series lengths differ: actual {s.size}, modeled {a.size}")
    if s.size == 0:
        raise DegenerateNormalizationError("cannot score empty series")
    return s, a


def rmae(actual: SeriesLike, modeled: SeriesLike) -> float:
    """Relative mean absolute error, normalised by both length and measured total."""

    s, a = _pair(actual, modeled)
    total = float(s.sum())
    if total <= 0.0:
        raise DegenerateNormalizationError("measured total is zero; RMAE is undefined")
    return float(np.abs(a - s).sum() / (s.size * total))


def rpde(actual: SeriesLike, modeled: SeriesLike) -> float:
    """Relative peak demand error; at most 1, and exactly 1 when the modelled peak is 0."""

    s, a = _pair(actual, modeled)
    peak = float(s.max())
    if peak <= 0.0:
        raise DegenerateNormalizationError("measured peak is not positive; RPDE is undefined")
    return (peak - float(a.max())) / peak


def per_customer_rmae(
    true_series: Sequence[SeriesLike], assigned_series: Sequence[SeriesLike]
) -> list[float]:
    """RMAE of each assigned profile against the customer's true series."""

    if len(true_series) != len(assigned_series):
        raise AlignmentError(
            f"{len(true_series)} true series but {len(assigned_series)} assigned series"
        )
    return [rmae(t, m) for t, m in zip(true_series, assigned_series, strict=True)]
