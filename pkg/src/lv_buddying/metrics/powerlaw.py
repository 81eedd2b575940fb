"""Power-law fits ``y = a · x^(−b)`` of error against feeder size.

The fit is ordinary least squares on ``log y = log a − b · log x``. Confidence bands use the
regression standard errors with a two-sided Student-t quantile on ``n − 2`` degrees of freedom.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

from lv_buddying.domain.series import FloatArray
from lv_buddying.errors import FitError

logger = logging.getLogger(__name__)

DEFAULT_CONFIDENCE = 0.99


class BandSample(BaseModel):
    x: float
    y: float
    lower: float
    upper: float


class PowerLawFit(BaseModel):
    """Fitted ``a``, ``b`` plus the log-space regression statistics behind the bands."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    n: int = Field(ge=3)
    confidence: float = Field(gt=0.0, lt=1.0)
    t_quantile: float
    residual_std: float = Field(ge=0.0, description="Residual standard error in log space")
    mean_log_x: float
    sxx: float = Field(gt=0.0, description="Σ (log x − mean log x)²")
    log_a_stderr: float
    b_stderr: float
    x_min: float
    x_max: float

    def predict(self, x: npt.ArrayLike) -> FloatArray:
        return self.a * np.power(np.asarray(x, dtype=float), -self.b)

    def band(self, x: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
        """Lower and upper confidence limits of the fitted curve at ``x``."""

        lx = np.log(np.asarray(x, dtype=float))
        centre = np.log(self.a) - self.b * lx
        half = (
            self.t_quantile
            * self.residual_std
            * np.sqrt(1.0 / self.n + (lx - self.mean_log_x) ** 2 / self.sxx)
        )
        return np.exp(centre - half), np.exp(centre + half)

    def a_interval(self) -> tuple[float, float]:
        half = self.t_quantile * self.log_a_stderr
        return float(self.a * np.exp(-half)), float(self.a * np.exp(half))

    def b_interval(self) -> tuple[float, float]:
        half = self.t_quantile * self.b_stderr
        return self.b - half, self.b + half

    def band_samples(self, n_points: int = 50) -> list[BandSample]:
        xs = np.geomspace(self.x_min, self.x_max, n_points)
        lower, upper = self.band(xs)
        ys = self.predict(xs)
        return [
            BandSample(x=float(x), y=float(y), lower=float(lo), upper=float(hi))
            for x, y, lo, hi in zip(xs, ys, lower, upper, strict=True)
        ]


def fit_power_law(
    points: Iterable[tuple[float, float]], *, confidence: float = DEFAULT_CONFIDENCE
) -> PowerLawFit:
    data = np.array(list(points), dtype=float).reshape(-1, 2)
    x, y = data[:, 0], data[:, 1]
    n = x.size
    if n < 3:
        raise FitError(f"a power-law fit needs at least 3 points, got {n}")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise FitError("power-law fits need strictly positive x and y")
    if np.all(x == x[0]):
        raise FitError("all x values are equal; the exponent is undetermined")

    lx, ly = np.log(x), np.log(y)
    reg = stats.linregress(lx, ly)
    residuals = ly - (reg.intercept + reg.slope * lx)
    dof = n - 2
    residual_std = float(np.sqrt(np.sum(residuals**2) / dof))
    mean_lx = float(lx.mean())
    sxx = float(np.sum((lx - mean_lx) ** 2))

    fit = PowerLawFit(
        a=float(np.exp(reg.intercept)),
        b=float(-reg.slope),
        n=n,
        confidence=confidence,
        t_quantile=float(stats.t.ppf(0.5 + confidence / 2.0, dof)),
        residual_std=residual_std,
        mean_log_x=mean_lx,
        sxx=sxx,
        log_a_stderr=residual_std * float(np.sqrt(1.0 / n + mean_lx**2 / sxx)),
        b_stderr=residual_std / float(np.sqrt(sxx)),
        x_min=float(x.min()),
        x_max=float(x.max()),
    )
    if fit.b <= 0.0:
        logger.warning(
            "Power-law exponent is not positive; error does not fall with size",
            extra={"a": fit.a, "b": fit.b, "n": n},
        )
    return fit
