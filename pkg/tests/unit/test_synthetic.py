"""Unit tests for the synthetic profile pool."""

from __future__ import annotations

from datetime import date

import numpy as np
import pytest
from pydantic import ValidationError

from lv_buddying.grouping import GroupId
from lv_buddying.pseudo.synthetic import (
    SyntheticPoolSpec,
    generate_pool,
    group_counts,
    synthesize_profile,
)


def test_default_pool_counts() -> None:
    spec = SyntheticPoolSpec()
    assert group_counts(spec.n_profiles, spec.group_mix) == {
        0: 49,
        1: 49,
        2: 36,
        3: 24,
        4: 36,
        5: 24,
        6: 24,
    }
    assert spec.days == 551
    assert spec.start_date == date(2014, 3, 20)


def test_group_counts_sum_to_n() -> None:
    mix = SyntheticPoolSpec().group_mix
    for n in (1, 7, 28, 100, 333):
        assert sum(group_counts(n, mix).values()) == n


def test_empty_pool() -> None:
    assert generate_pool(SyntheticPoolSpec(n_profiles=0)) == []


def test_pool_is_reproducible(pool_spec: SyntheticPoolSpec, synthetic_pool) -> None:
    again = generate_pool(pool_spec)

    assert [p.profile_id for p in again] == [p.profile_id for p in synthetic_pool]
    for a, b in zip(again, synthetic_pool, strict=True):
        assert a.group == b.group
        np.testing.assert_array_equal(a.series.values, b.series.values)


def test_pool_shape(pool_spec: SyntheticPoolSpec, synthetic_pool) -> None:
    assert synthetic_pool[0].profile_id == "P0001"
    assert all(len(p.series) == pool_spec.days * 48 for p in synthetic_pool)
    assert all(p.series.start_date == pool_spec.start_date for p in synthetic_pool)
    assert all(np.all(p.series.values >= 0.0) for p in synthetic_pool)

    counts: dict[int, int] = {}
    for p in synthetic_pool:
        counts[int(p.group)] = counts.get(int(p.group), 0) + 1
    assert counts == group_counts(pool_spec.n_profiles, pool_spec.group_mix)


def test_different_seeds_differ(pool_spec: SyntheticPoolSpec, synthetic_pool) -> None:
    other = generate_pool(pool_spec.model_copy(update={"seed": pool_spec.seed + 1}))
    assert not np.array_equal(other[0].series.values, synthetic_pool[0].series.values)


def test_profile_scales_with_demand_level() -> None:
    spec = SyntheticPoolSpec(n_profiles=1, days=14)
    one = synthesize_profile("P1", GroupId(2), 8.0, spec, np.random.default_rng(3))
    two = synthesize_profile("P1", GroupId(2), 16.0, spec, np.random.default_rng(3))

    np.testing.assert_allclose(two.series.values, 2.0 * one.series.values, rtol=1e-12)


@pytest.mark.parametrize(
    "mix",
    [
        {0: 0.5, 9: 0.5},
        {0: 0.5, 1: 0.6},
        {0: 1.2, 1: -0.2},
        {},
    ],
)
def test_invalid_mix_is_rejected(mix: dict[int, float]) -> None:
    with pytest.raises(ValidationError):
        SyntheticPoolSpec(group_mix=mix)
