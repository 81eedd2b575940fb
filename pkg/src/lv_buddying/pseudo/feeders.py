"""Pseudo-feeders: feeders populated only with known monitored profiles.

A type-1 pseudo-feeder draws its customers from the same pool later used for buddying, so the
true profile is always a candidate. A type-2 pseudo-feeder draws from one half of a parity
split of the pool and is buddied from the other half.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Literal, cast

import numpy as np

from lv_buddying.domain.series import HalfHourlySeries, aggregate
from lv_buddying.domain.types import (
    PHASES,
    BuddyAssignment,
    Customer,
    Feeder,
    MonitoredProfile,
    Phase,
)
from lv_buddying.errors import CoverageError, InvalidInputError, SplitError
from lv_buddying.grouping import GroupId
from lv_buddying.methods.candidates import ProfilePool

logger = logging.getLogger(__name__)

PseudoType = Literal[1, 2]


@dataclass(frozen=True, slots=True)
class PseudoFeeder:
    """A feeder whose readings are the exact aggregate of its generating profiles."""

    feeder: Feeder
    generating: Mapping[str, MonitoredProfile] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = {c.customer_id for c in self.feeder.customers} - set(self.generating)
        if missing:
            raise InvalidInputError(
                f"pseudo-feeder {self.feeder.feeder_id}: no generating profile for "
                f"{sorted(missing)}"
            )
        object.__setattr__(self, "generating", MappingProxyType(dict(self.generating)))

    def __reduce__(self) -> tuple[object, ...]:
        return (PseudoFeeder, (self.feeder, dict(self.generating)))

    @property
    def feeder_id(self) -> str:
        return self.feeder.feeder_id

    @property
    def truth(self) -> dict[str, str]:
        """customer_id -> generating profile_id."""

        return {cid: p.profile_id for cid, p in self.generating.items()}


def _phase_aggregates(
    customers: Sequence[Customer], series: Mapping[str, HalfHourlySeries]
) -> dict[Phase, HalfHourlySeries]:
    out: dict[Phase, HalfHourlySeries] = {}
    for phase in PHASES:
        members = [series[c.customer_id] for c in customers if c.phase == phase]
        if members:
            out[phase] = aggregate(members)
    return out


def make_type1(
    template: Feeder, pool: ProfilePool | Iterable[MonitoredProfile], seed: int
) -> PseudoFeeder:
    """Replace every template customer with a uniform in-group draw from ``pool``.

    Customer ids, groups and phases are kept; mean daily demands become the drawn profiles'
    own means. Customers are not pinned, so buddying has to find their profiles.
    """

    pool = ProfilePool.of(pool)
    rng = np.random.default_rng(seed)
    customers: list[Customer] = []
    generating: dict[str, MonitoredProfile] = {}
    for c in template.customers:
        candidates = pool.in_group(c.group)
        if candidates.size == 0:
            raise CoverageError(
                f"template {template.feeder_id}: pool has no profiles in group {c.group} "
                f"for customer {c.customer_id}"
            )
        profile = pool.profiles[int(candidates[rng.integers(candidates.size)])]
        generating[c.customer_id] = profile
        customers.append(
            Customer(
                customer_id=c.customer_id,
                group=c.group,
                mean_daily_demand=profile.mean_daily_demand,
                phase=c.phase,
            )
        )

    series = {cid: p.series for cid, p in generating.items()}
    feeder = Feeder(
        feeder_id=template.feeder_id,
        customers=tuple(customers),
        substation_series=aggregate(list(series.values())),
        phase_series=_phase_aggregates(customers, series),
    )
    return PseudoFeeder(feeder=feeder, generating=generating)


def make_type2_split(
    pool: Iterable[MonitoredProfile],
) -> tuple[list[MonitoredProfile], list[MonitoredProfile]]:
    """Per group, sort by (mean daily demand, id); even positions populate, odd positions buddy."""

    by_group: dict[GroupId, list[MonitoredProfile]] = {}
    for p in pool:
        by_group.setdefault(p.group, []).append(p)

    populate: list[MonitoredProfile] = []
    buddy: list[MonitoredProfile] = []
    for group in sorted(by_group):
        members = sorted(by_group[group], key=lambda p: (p.mean_daily_demand, p.profile_id))
        if len(members) < 2:
            raise SplitError(f"group {group} has {len(members)} profile(s); splitting needs 2")
        populate.extend(members[0::2])
        buddy.extend(members[1::2])
    return populate, buddy


def make_type2(
    template: Feeder, pool: Iterable[MonitoredProfile], seed: int
) -> tuple[PseudoFeeder, list[MonitoredProfile]]:
    """Split ``pool``, populate from the even half and return the odd half for buddying."""

    populate, buddy = make_type2_split(pool)
    return make_type1(template, populate, seed), buddy


def recovery_rate(pseudo: PseudoFeeder, assignment: BuddyAssignment) -> float:
    """Share of customers assigned exactly their generating profile."""

    truth = pseudo.truth
    hits = sum(assignment.profile_for(cid) == pid for cid, pid in truth.items())
    return hits / len(truth)


def random_template(
    feeder_id: str,
    n_customers: int,
    group_mix: Mapping[int, float],
    seed: int,
    *,
    with_phases: bool = True,
) -> Feeder:
    """A template feeder of ``n_customers`` drawn from ``group_mix``, with random phases."""

    if n_customers < 1:
        raise InvalidInputError(f"a template needs at least one customer, got {n_customers}")
    groups = sorted(group_mix)
    weights = np.array([group_mix[g] for g in groups], dtype=float)
    rng = np.random.default_rng(seed)
    drawn = rng.choice(groups, size=n_customers, p=weights / weights.sum())
    phases = rng.integers(1, 4, size=n_customers)
    width = max(3, len(str(n_customers)))
    customers = tuple(
        Customer(
            customer_id=f"{feeder_id}-C{j + 1:0{width}d}",
            group=GroupId(int(g)),
            mean_daily_demand=0.0,
            phase=cast(Phase, int(phases[j])) if with_phases else None,
        )
        for j, g in enumerate(drawn)
    )
    return Feeder(feeder_id=feeder_id, customers=customers)


def pool_group_mix(pool: Iterable[MonitoredProfile]) -> dict[int, float]:
    """Group proportions of a pool."""

    counts: dict[int, int] = {}
    for p in pool:
        counts[int(p.group)] = counts.get(int(p.group), 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise InvalidInputError("cannot take the group mix of an empty pool")
    return {g: n / total for g, n in sorted(counts.items())}


def build_suite(
    pool: Sequence[MonitoredProfile],
    *,
    kind: PseudoType,
    n_feeders: int,
    min_size: int,
    max_size: int,
    seed: int,
) -> tuple[list[PseudoFeeder], list[MonitoredProfile]]:
    """``n_feeders`` pseudo-feeders of random size in ``[min_size, max_size]``.

    Returns the feeders and the pool they must be buddied from (the whole pool for type 1, the
    odd half for type 2). Template group mixes follow the populating pool.
    """

    if not 1 <= min_size <= max_size:
        raise InvalidInputError(f"invalid size range {min_size}..{max_size}")
    if kind == 1:
        populate, buddy = list(pool), list(pool)
    else:
        populate, buddy = make_type2_split(pool)
    mix = pool_group_mix(populate)
    populate_pool = ProfilePool(populate)

    root = np.random.SeedSequence(seed)
    sizes = np.random.default_rng(root.spawn(1)[0]).integers(
        min_size, max_size + 1, size=n_feeders
    )
    width = max(3, len(str(n_feeders)))
    feeders = []
    for i, (size, child) in enumerate(zip(sizes, root.spawn(n_feeders), strict=True)):
        template_seed, draw_seed = (int(s) for s in child.generate_state(2))
        template = random_template(f"PF{i + 1:0{width}d}", int(size), mix, template_seed)
        feeders.append(make_type1(template, populate_pool, draw_seed))

    logger.info(
        "Pseudo-feeder suite built",
        extra={"type": kind, "feeders": n_feeders, "buddy_pool": len(buddy), "seed": seed},
    )
    return feeders, buddy
