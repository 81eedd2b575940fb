"""Unit tests for pseudo-feeders and suite storage."""

from __future__ import annotations

import pickle
from pathlib import Path

import numpy as np
import pytest

from lv_buddying.domain.series import aggregate
from lv_buddying.domain.types import BuddyAssignment, BuddyMethod, Customer, Feeder
from lv_buddying.errors import CoverageError, InvalidInputError, SplitError
from lv_buddying.grouping import GroupId
from lv_buddying.methods import simple_buddy
from lv_buddying.pseudo import (
    PseudoFeeder,
    SuiteManifest,
    build_suite,
    load_suite,
    make_type1,
    make_type2,
    make_type2_split,
    pool_group_mix,
    random_template,
    recovery_rate,
    write_suite,
)


def _template(*groups: int) -> Feeder:
    return Feeder(
        feeder_id="T1",
        customers=tuple(
            Customer(customer_id=f"c{j}", group=GroupId(g), mean_daily_demand=0.0, phase=1)
            for j, g in enumerate(groups)
        ),
    )


def test_type2_split_alternates_by_mean(make_daily_profile) -> None:
    pool = [
        make_daily_profile("A", 0, 4.0),
        make_daily_profile("B", 0, 1.0),
        make_daily_profile("C", 0, 3.0),
        make_daily_profile("D", 0, 2.0),
        make_daily_profile("E", 1, 5.0),
        make_daily_profile("F", 1, 5.0),
    ]

    populate, buddy = make_type2_split(pool)

    assert [p.profile_id for p in populate] == ["B", "C", "E"]
    assert [p.profile_id for p in buddy] == ["D", "A", "F"]


def test_type2_split_needs_two_per_group(make_daily_profile) -> None:
    pool = [make_daily_profile("A", 0, 1.0), make_daily_profile("B", 0, 2.0)]
    with pytest.raises(SplitError):
        make_type2_split([*pool, make_daily_profile("C", 1, 1.0)])


def test_type1_feeder_is_the_aggregate_of_its_truth(synthetic_pool) -> None:
    template = _template(0, 0, 1, 2, 5)

    pseudo = make_type1(template, synthetic_pool, seed=4)

    feeder = pseudo.feeder
    assert [c.customer_id for c in feeder.customers] == ["c0", "c1", "c2", "c3", "c4"]
    for c in feeder.customers:
        profile = pseudo.generating[c.customer_id]
        assert profile.group == c.group
        assert c.mean_daily_demand == profile.mean_daily_demand
        assert c.monitored_profile is None
    expected = np.sum([p.series.values for p in pseudo.generating.values()], axis=0)
    assert feeder.substation_series is not None
    np.testing.assert_allclose(feeder.substation_series.values, expected)
    assert sorted(feeder.phase_series) == [1]


def test_type1_draws_are_seeded(synthetic_pool) -> None:
    template = _template(0, 1, 1, 4)
    assert make_type1(template, synthetic_pool, 8).truth == make_type1(
        template, synthetic_pool, 8
    ).truth


def test_simple_buddy_recovers_type1_feeders(synthetic_pool) -> None:
    pseudo = make_type1(_template(0, 1, 2, 3, 4, 5, 6), synthetic_pool, seed=1)
    assignment = simple_buddy(pseudo.feeder, synthetic_pool)
    assert recovery_rate(pseudo, assignment) == 1.0


def test_type1_needs_every_group(make_daily_profile) -> None:
    with pytest.raises(CoverageError):
        make_type1(_template(0, 3), [make_daily_profile("A", 0, 1.0)], seed=0)


def test_type2_buddies_from_the_other_half(synthetic_pool) -> None:
    pseudo, buddy = make_type2(_template(0, 1, 2), synthetic_pool, seed=2)
    buddy_ids = {p.profile_id for p in buddy}
    assert buddy_ids.isdisjoint(pseudo.truth.values())


def test_recovery_rate_counts_exact_hits(synthetic_pool) -> None:
    pseudo = make_type1(_template(0, 0), synthetic_pool, seed=3)
    truth = pseudo.truth
    wrong = next(p.profile_id for p in synthetic_pool if p.profile_id != truth["c1"])
    assignment = BuddyAssignment(
        feeder_id="T1",
        profiles={"c0": truth["c0"], "c1": wrong},
        method=BuddyMethod.SIMPLE,
        weight=1.0,
    )
    assert recovery_rate(pseudo, assignment) == 0.5


def test_pseudo_feeder_needs_truth_for_every_customer(synthetic_pool) -> None:
    pseudo = make_type1(_template(0, 1), synthetic_pool, seed=0)
    with pytest.raises(InvalidInputError):
        PseudoFeeder(feeder=pseudo.feeder, generating={"c0": pseudo.generating["c0"]})

    copy = pickle.loads(pickle.dumps(pseudo))
    assert copy.truth == pseudo.truth


def test_random_template() -> None:
    mix = {0: 0.5, 4: 0.5}
    template = random_template("PF7", 12, mix, seed=5)

    assert template.n_customers == 12
    assert template.customers[0].customer_id == "PF7-C001"
    assert {int(c.group) for c in template.customers} <= {0, 4}
    assert {c.phase for c in template.customers} <= {1, 2, 3}

    flat = random_template("PF7", 3, mix, seed=5, with_phases=False)
    assert all(c.phase is None for c in flat.customers)
    with pytest.raises(InvalidInputError):
        random_template("PF7", 0, mix, seed=5)


def test_pool_group_mix(make_daily_profile) -> None:
    pool = [make_daily_profile(f"P{i}", i % 2 * 4, 1.0) for i in range(4)]
    assert pool_group_mix(pool) == {0: 0.5, 4: 0.5}
    with pytest.raises(InvalidInputError):
        pool_group_mix([])


def test_build_suite_type1(synthetic_pool) -> None:
    feeders, buddy = build_suite(
        synthetic_pool, kind=1, n_feeders=4, min_size=2, max_size=5, seed=0
    )

    assert [f.feeder_id for f in feeders] == ["PF001", "PF002", "PF003", "PF004"]
    assert all(2 <= f.feeder.n_customers <= 5 for f in feeders)
    assert len(buddy) == len(synthetic_pool)


def test_build_suite_type2_keeps_pools_apart(synthetic_pool) -> None:
    feeders, buddy = build_suite(
        synthetic_pool, kind=2, n_feeders=3, min_size=3, max_size=3, seed=1
    )

    buddy_ids = {p.profile_id for p in buddy}
    for f in feeders:
        assert buddy_ids.isdisjoint(f.truth.values())
    counts: dict[int, int] = {}
    for p in synthetic_pool:
        counts[int(p.group)] = counts.get(int(p.group), 0) + 1
    assert len(buddy) == sum(n // 2 for n in counts.values())


def test_build_suite_rejects_bad_sizes(synthetic_pool) -> None:
    with pytest.raises(InvalidInputError):
        build_suite(synthetic_pool, kind=1, n_feeders=1, min_size=5, max_size=4, seed=0)


def test_suite_round_trip(tmp_path: Path, synthetic_pool) -> None:
    feeders, buddy = build_suite(
        synthetic_pool, kind=2, n_feeders=2, min_size=2, max_size=4, seed=3
    )
    manifest = SuiteManifest(kind=2, feeders=2, seed=3)

    write_suite(tmp_path / "suite", feeders, buddy, manifest)
    suite = load_suite(tmp_path / "suite")

    assert suite.manifest == manifest
    assert sorted(p.profile_id for p in suite.pool) == sorted(p.profile_id for p in buddy)
    assert [f.feeder_id for f in suite.feeders] == [f.feeder_id for f in feeders]
    for original, loaded in zip(feeders, suite.feeders, strict=True):
        assert loaded.truth == original.truth
        assert [c.group for c in loaded.feeder.customers] == [
            c.group for c in original.feeder.customers
        ]
        assert loaded.feeder.substation_series is not None
        assert original.feeder.substation_series is not None
        np.testing.assert_array_equal(
            loaded.feeder.substation_series.values,
            original.feeder.substation_series.values,
        )
        generating = [loaded.generating[c.customer_id].series for c in loaded.feeder.customers]
        np.testing.assert_array_equal(
            loaded.feeder.substation_series.values, aggregate(generating).values
        )
        for customer_id, profile in original.generating.items():
            np.testing.assert_array_equal(
                loaded.generating[customer_id].series.values, profile.series.values
            )
