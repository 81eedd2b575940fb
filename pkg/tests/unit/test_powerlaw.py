"""Unit tests for power-law fits of error against feeder size."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from lv_buddying.errors import FitError
from lv_buddying.metrics import fit_power_law

SIZES = [float(k * k) for k in range(2, 11)]


def test_exact_power_law_is_recovered() -> None:
    fit = fit_power_law([(x, 2.0 / x) for x in (1.0, 2.0, 5.0, 10.0, 40.0)])

    assert fit.a == pytest.approx(2.0)
    assert fit.b == pytest.approx(1.0)
    assert fit.residual_std == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(fit.predict([4.0, 8.0]), [0.5, 0.25])


def test_intervals_cover_the_generating_curve() -> None:
    points = [(x, 5.0 * x**-0.5 * (1.02 if x == 25.0 else 1.0)) for x in SIZES]

    fit = fit_power_law(points)

    lo_a, hi_a = fit.a_interval()
    lo_b, hi_b = fit.b_interval()
    assert lo_a < 5.0 < hi_a
    assert lo_b < 0.5 < hi_b
    assert fit.b == pytest.approx(0.5, abs=1e-3)
    assert fit.n == len(SIZES)
    assert fit.confidence == 0.99

    lower, upper = fit.band(SIZES)
    truth = 5.0 * np.power(SIZES, -0.5)
    assert np.all(lower < truth)
    assert np.all(truth < upper)


def test_wider_confidence_widens_the_band() -> None:
    points = [(x, 5.0 * x**-0.5 * (1.0 + 0.03 * (-1) ** i)) for i, x in enumerate(SIZES)]
    narrow = fit_power_law(points, confidence=0.9)
    wide = fit_power_law(points)

    lo_n, hi_n = narrow.band([30.0])
    lo_w, hi_w = wide.band([30.0])
    assert lo_w[0] < lo_n[0] < hi_n[0] < hi_w[0]


def test_band_samples_span_the_fitted_sizes() -> None:
    fit = fit_power_law(
        [(x, 3.0 * x**-0.7 * (1.0 + 0.05 * (-1) ** i)) for i, x in enumerate(SIZES)]
    )
    samples = fit.band_samples(10)

    assert len(samples) == 10
    assert samples[0].x == pytest.approx(4.0)
    assert samples[-1].x == pytest.approx(100.0)
    for s in samples:
        assert s.lower <= s.y <= s.upper


def test_rising_error_is_reported(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        fit = fit_power_law([(x, 0.1 * x) for x in SIZES])
    assert fit.b < 0.0
    assert any("not positive" in r.getMessage() for r in caplog.records)


@pytest.mark.parametrize(
    "points",
    [
        [(1.0, 1.0), (2.0, 0.5)],
        [(1.0, 1.0), (2.0, 0.0), (3.0, 0.3)],
        [(-1.0, 1.0), (2.0, 0.5), (3.0, 0.3)],
        [(5.0, 1.0), (5.0, 0.5), (5.0, 0.3)],
    ],
)
def test_unfittable_points(points: list[tuple[float, float]]) -> None:
    with pytest.raises(FitError):
        fit_power_law(points)


def test_noise_free_points_give_a_and_b_to_1e_9() -> None:
    fit = fit_power_law([(x, 2.0 / x) for x in SIZES])

    assert abs(fit.a - 2.0) <= 1e-9
    assert abs(fit.b - 1.0) <= 1e-9
    lower, upper = fit.band(SIZES)
    np.testing.assert_allclose(lower, upper, rtol=1e-9)


def test_band_covers_the_true_curve_under_multiplicative_noise() -> None:
    sizes = np.arange(5.0, 51.0, 3.0)
    centre = float(np.exp(np.log(sizes).mean()))
    covered = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        noisy = 2.0 / sizes * np.exp(rng.normal(0.0, 0.05, sizes.size))
        fit = fit_power_law(zip(sizes, noisy, strict=True))
        lower, upper = fit.band([centre])
        covered += int(lower[0] <= 2.0 / centre <= upper[0])

    assert covered >= 97
