"""Unit tests for the random-sampling baseline."""

from __future__ import annotations

from datetime import date

import numpy as np
import pytest

from lv_buddying.domain.series import aggregate, slice_days
from lv_buddying.domain.types import BuddyMethod, TrainingWindow
from lv_buddying.errors import InvalidInputError
from lv_buddying.methods import (
    DEFAULT_SAMPLES,
    CandidateIndex,
    ProfilePool,
    monte_carlo_buddy,
    sample_rmae,
)
from lv_buddying.metrics import rmae

START = date(2014, 9, 1)
ONE_WEEK = TrainingWindow(start=START, weeks=1)


def test_single_sample_is_the_first_draw(make_feeder, synthetic_pool) -> None:
    feeder = make_feeder("F1", [synthetic_pool[i] for i in (2, 9, 17)])
    pool = ProfilePool(synthetic_pool)
    index = CandidateIndex(feeder, pool)
    expected = index.random_genomes(1, np.random.default_rng(42))[0]

    assignment, samples = monte_carlo_buddy(feeder, pool, ONE_WEEK, n_samples=1, seed=42)

    assert assignment.profiles == index.to_profile_ids(expected)
    assert len(samples) == 1
    assert assignment.method is BuddyMethod.MONTE_CARLO
    assert assignment.weight == 0.0


def test_samples_are_rmae_of_the_drawn_assignment(make_feeder, synthetic_pool) -> None:
    chosen = [synthetic_pool[i] for i in (3, 10, 19)]
    feeder = make_feeder("F1", chosen)

    result = sample_rmae(feeder, synthetic_pool, ONE_WEEK, n_samples=25, seed=7)

    assert result.rmae_samples.shape == (25,)
    by_id = {p.profile_id: p for p in synthetic_pool}
    modeled = aggregate(
        [by_id[result.assignment.profiles[c.customer_id]].series for c in feeder.customers]
    )
    assert feeder.substation_series is not None
    end = date(2014, 9, 7)
    expected = rmae(
        slice_days(feeder.substation_series, START, end), slice_days(modeled, START, end)
    )
    assert result.best_rmae == pytest.approx(expected)
    assert result.assignment.fitness == pytest.approx(result.best_rmae)


def test_one_profile_per_group_gives_constant_samples(make_profile, make_feeder) -> None:
    pool = [make_profile("P1", 0, 0.2), make_profile("P2", 1, 0.3)]
    truth = [make_profile("T1", 0, 0.25), make_profile("T2", 1, 0.25)]
    feeder = make_feeder("F1", truth)

    _, samples = monte_carlo_buddy(feeder, pool, ONE_WEEK, n_samples=50, seed=0)

    assert len(samples) == 50
    assert len(set(samples)) == 1


def test_truth_in_a_small_pool_is_found(make_profile, make_feeder) -> None:
    pool = [make_profile("P1", 0, 0.1), make_profile("P2", 0, 0.3), make_profile("P3", 0, 0.6)]
    feeder = make_feeder("F1", [pool[2]])

    result = sample_rmae(feeder, pool, ONE_WEEK, n_samples=200, seed=5)

    assert result.best_rmae == pytest.approx(0.0, abs=1e-12)
    assert result.assignment.profiles == {"F1-C001": "P3"}


def test_sample_count_must_be_positive(make_profile, make_feeder) -> None:
    pool = [make_profile("P1", 0, 0.1)]
    with pytest.raises(InvalidInputError):
        sample_rmae(make_feeder("F1", pool), pool, ONE_WEEK, n_samples=0, seed=0)
    assert DEFAULT_SAMPLES == 1000
