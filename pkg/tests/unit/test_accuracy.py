"""Unit tests for RMAE and RPDE."""

from __future__ import annotations

from datetime import date

import numpy as np
import pytest

from lv_buddying.domain.series import HalfHourlySeries
from lv_buddying.errors import AlignmentError, DegenerateNormalizationError
from lv_buddying.metrics import per_customer_rmae, rmae, rpde


def test_rmae_worked_example() -> None:
    # Σ|a − s| = 4, H = 4, S = 10.
    assert rmae([1.0, 2.0, 3.0, 4.0], [2.0, 2.0, 2.0, 2.0]) == pytest.approx(0.1)


def test_rmae_matches_direct_formula() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        size = int(rng.integers(1, 200))
        s = rng.gamma(2.0, 0.3, size) + 1e-3
        a = rng.gamma(2.0, 0.3, size)
        direct = np.sum(np.abs(a - s)) / (size * np.sum(s))
        assert rmae(s, a) == pytest.approx(direct, rel=1e-12)


def test_rmae_is_scale_invariant_and_zero_on_equality() -> None:
    rng = np.random.default_rng(1)
    s = rng.random(96) + 0.1
    a = rng.random(96)
    assert rmae(3.5 * s, 3.5 * a) == pytest.approx(rmae(s, a))
    assert rmae(s, s) == 0.0


def test_rpde_signs() -> None:
    s = [1.0, 4.0, 2.0]
    assert rpde(s, [2.0, 2.0, 1.0]) == pytest.approx(0.5)
    assert rpde(s, [1.0, 5.0, 1.0]) == pytest.approx(-0.25)
    assert rpde(s, [0.0, 0.0, 0.0]) == 1.0


def test_series_and_arrays_are_interchangeable() -> None:
    values = np.linspace(0.2, 1.0, 48)
    series = HalfHourlySeries(start_date=date(2014, 9, 1), values=values)
    assert rmae(series, values * 1.1) == pytest.approx(rmae(values, values * 1.1))


def test_degenerate_inputs() -> None:
    with pytest.raises(AlignmentError):
        rmae([1.0, 2.0], [1.0])
    with pytest.raises(DegenerateNormalizationError):
        rmae([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(DegenerateNormalizationError):
        rpde([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(DegenerateNormalizationError):
        rmae([], [])


def test_per_customer_rmae() -> None:
    true = [[1.0, 1.0], [2.0, 2.0]]
    assigned = [[1.0, 1.0], [1.0, 3.0]]
    assert per_customer_rmae(true, assigned) == pytest.approx([0.0, 0.5 / 2.0])
    with pytest.raises(AlignmentError):
        per_customer_rmae(true, assigned[:1])


def test_rpde_matches_direct_formula() -> None:
    rng = np.random.default_rng(7)
    for _ in range(1000):
        size = int(rng.integers(1, 200))
        s = rng.gamma(2.0, 0.3, size) + 1e-3
        a = rng.gamma(2.0, 0.3, size)
        peak = max(float(v) for v in s)
        direct = (peak - max(float(v) for v in a)) / peak
        assert rpde(s, a) == pytest.approx(direct, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("scale", [0.5, 3.0])
def test_joint_scaling_leaves_both_errors_unchanged(scale: float) -> None:
    rng = np.random.default_rng(11)
    s = rng.gamma(2.0, 0.3, 96) + 0.01
    a = rng.gamma(2.0, 0.3, 96)

    assert rmae(scale * s, scale * a) == pytest.approx(rmae(s, a), rel=1e-12)
    assert rpde(scale * s, scale * a) == pytest.approx(rpde(s, a), rel=1e-12, abs=1e-15)
