"""Test configuration.

Tests build small deterministic pools and feeders through the factory fixtures below, and rely
on `tmp_path`, `monkeypatch` and `caplog` from pytest for everything else.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from datetime import date

import numpy as np
import pytest

from lv_buddying.domain.series import SLOTS_PER_DAY, HalfHourlySeries, aggregate
from lv_buddying.domain.types import Customer, Feeder, MonitoredProfile, Phase
from lv_buddying.grouping import GroupId
from lv_buddying.pseudo.synthetic import SyntheticPoolSpec, generate_pool

# A Monday.
START = date(2014, 9, 1)

SeriesFactory = Callable[..., HalfHourlySeries]
ProfileFactory = Callable[..., MonitoredProfile]
FeederFactory = Callable[..., Feeder]


def _series(day: Sequence[float] | float, days: int = 7, start: date = START) -> HalfHourlySeries:
    values = np.asarray(day, dtype=float)
    if values.ndim == 0:
        values = np.full(SLOTS_PER_DAY, float(values))
    return HalfHourlySeries(start_date=start, values=np.tile(values, days))


@pytest.fixture
def make_series() -> SeriesFactory:
    """Series repeating one day (48 values, or a constant) for ``days`` days."""

    return _series


@pytest.fixture
def make_profile() -> ProfileFactory:
    def _make(
        profile_id: str,
        group: int,
        day: Sequence[float] | float,
        *,
        days: int = 7,
        start: date = START,
    ) -> MonitoredProfile:
        return MonitoredProfile(
            profile_id=profile_id, series=_series(day, days, start), group=GroupId(group)
        )

    return _make


@pytest.fixture
def make_daily_profile() -> ProfileFactory:
    """Profile whose whole daily demand falls in one slot, so its mean is exactly ``kwh``."""

    def _make(profile_id: str, group: int, kwh: float, *, days: int = 7) -> MonitoredProfile:
        day = np.zeros(SLOTS_PER_DAY)
        day[18] = kwh
        return MonitoredProfile(
            profile_id=profile_id, series=_series(day, days), group=GroupId(group)
        )

    return _make


@pytest.fixture
def make_feeder() -> FeederFactory:
    """Feeder whose customers are exactly the given profiles (substation = their sum)."""

    def _make(
        feeder_id: str,
        profiles: Sequence[MonitoredProfile],
        *,
        phases: Sequence[Phase] | None = None,
        with_substation: bool = True,
    ) -> Feeder:
        customers = tuple(
            Customer(
                customer_id=f"{feeder_id}-C{j + 1:03d}",
                group=p.group,
                mean_daily_demand=p.mean_daily_demand,
                phase=None if phases is None else phases[j],
            )
            for j, p in enumerate(profiles)
        )
        phase_series = {}
        if phases is not None:
            for phase in sorted(set(phases)):
                members = [p.series for p, ph in zip(profiles, phases, strict=True) if ph == phase]
                phase_series[phase] = aggregate(members)
        return Feeder(
            feeder_id=feeder_id,
            customers=customers,
            substation_series=aggregate([p.series for p in profiles]) if with_substation else None,
            phase_series=phase_series,
        )

    return _make


@pytest.fixture(scope="session")
def pool_spec() -> SyntheticPoolSpec:
    """Four weeks of data starting on a Monday; every group has at least two profiles."""

    return SyntheticPoolSpec(n_profiles=28, days=28, start_date=START, seed=11)


@pytest.fixture(scope="session")
def synthetic_pool(pool_spec: SyntheticPoolSpec) -> list[MonitoredProfile]:
    return generate_pool(pool_spec)
