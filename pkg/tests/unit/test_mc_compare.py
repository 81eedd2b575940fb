"""Unit tests for the GA against Monte Carlo comparison."""

from __future__ import annotations

from datetime import date

import pytest

from lv_buddying.domain.types import TrainingWindow
from lv_buddying.experiments import percentile_band, run_mc_comparison
from lv_buddying.methods import GaConfig

WINDOW = TrainingWindow(start=date(2014, 9, 1), weeks=1)
SMALL = GaConfig(population=20, elite=4, generations=10, reset_generation=None)


@pytest.mark.parametrize(
    ("percentile", "band"),
    [
        (0.0, "best 2.5%"),
        (0.025, "best 2.5%"),
        (0.04, "best 5.0%"),
        (0.2, "best 30.0%"),
        (0.6, "worse than 30%"),
    ],
)
def test_percentile_band(percentile: float, band: str) -> None:
    assert percentile_band(percentile) == band


def test_single_candidate_pool_ties(make_profile, make_feeder) -> None:
    pool = [make_profile("P1", 0, 0.2, days=14), make_profile("P2", 1, 0.3, days=14)]
    truth = [make_profile("T1", 0, 0.25, days=14), make_profile("T2", 1, 0.25, days=14)]
    feeder = make_feeder("F1", truth)

    comparison = run_mc_comparison(
        [feeder], pool, WINDOW, date(2014, 9, 8), date(2014, 9, 14), ga=SMALL, n_samples=10
    )

    (row,) = comparison.rows.to_dict("records")
    assert row["difference"] == 0.0
    assert row["ga_percentile"] == 0.0
    assert row["band"] == "best 2.5%"
    assert comparison.wins == 0
    assert comparison.band_counts() == {"best 2.5%": 1}


def test_comparison_over_a_pool(make_feeder, synthetic_pool) -> None:
    feeders = [
        make_feeder("F1", synthetic_pool[:4]),
        make_feeder("F2", synthetic_pool[10:16]),
    ]

    comparison = run_mc_comparison(
        feeders,
        synthetic_pool,
        WINDOW,
        date(2014, 9, 15),
        date(2014, 9, 28),
        ga=SMALL,
        n_samples=50,
        master_seed=3,
    )

    rows = comparison.rows
    assert list(rows["feeder_id"]) == ["F1", "F2"]
    assert (rows["ga_percentile"].between(0.0, 1.0)).all()
    assert (rows["difference"] == rows["rmae_mc"] - rows["rmae_ga"]).all()
    summary = comparison.summary()
    assert summary["feeders"] == 2
    assert summary["ga_wins"] == comparison.wins


def test_uncovered_feeders_are_skipped(make_feeder, synthetic_pool) -> None:
    comparison = run_mc_comparison(
        [make_feeder("F1", synthetic_pool[:3])],
        synthetic_pool,
        WINDOW,
        date(2015, 1, 5),
        date(2015, 1, 11),
        ga=SMALL,
        n_samples=5,
    )

    assert comparison.rows.empty
    assert comparison.wins == 0
    assert comparison.summary()["mean_rmae_ga"] is None
