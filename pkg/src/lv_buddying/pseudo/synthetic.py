"""Seeded synthetic pool of monitored domestic profiles.

Each profile is a daily shape (baseline plus morning and evening bumps, overnight storage load
for Economy 7 groups, a midday dip for PV groups) scaled by a demand level, a seasonal cosine
and a weekend factor, then multiplied by mean-one lognormal noise, with occasional spikes added.
Everything except the noise draws is linear in the demand level.
"""

from __future__ import annotations

import logging
from datetime import date, timedelta

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lv_buddying.domain.series import SLOTS_PER_DAY, FloatArray, HalfHourlySeries
from lv_buddying.domain.types import MonitoredProfile
from lv_buddying.grouping import DEFAULT_RULES, GroupId, representative_attributes

logger = logging.getLogger(__name__)

_SLOTS = np.arange(SLOTS_PER_DAY, dtype=float)
_STORAGE_SLOTS = slice(0, 14)
_PV_SLOTS = slice(20, 32)


class DemandLevel(BaseModel):
    """Lognormal distribution of a group's mean daily demand (kWh/day)."""

    model_config = ConfigDict(frozen=True)

    median: float = Field(gt=0.0)
    sigma: float = Field(gt=0.0)


class Volatility(BaseModel):
    model_config = ConfigDict(frozen=True)

    noise_sigma: float = Field(default=0.3, gt=0.0, description="Per-slot lognormal sigma")
    spike_rate: float = Field(default=0.01, gt=0.0, lt=1.0, description="Spikes per slot")
    spike_scale: float = Field(default=3.0, gt=0.0, description="Spike size in mean slots")
    seasonal_amplitude: float = Field(default=0.25, gt=0.0, lt=1.0)
    weekend_factor: float = Field(default=1.1, gt=0.0)


def _default_mix() -> dict[int, float]:
    return {0: 0.2, 1: 0.2, 2: 0.15, 3: 0.1, 4: 0.15, 5: 0.1, 6: 0.1}


def _default_levels() -> dict[int, DemandLevel]:
    medians = {0: 7.0, 1: 9.0, 2: 11.0, 3: 14.0, 4: 13.0, 5: 8.0, 6: 7.0}
    return {g: DemandLevel(median=m, sigma=0.35) for g, m in medians.items()}


class SyntheticPoolSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_profiles: int = Field(default=242, ge=0)
    days: int = Field(default=551, ge=1)
    start_date: date = date(2014, 3, 20)
    group_mix: dict[int, float] = Field(default_factory=_default_mix)
    demand: dict[int, DemandLevel] = Field(default_factory=_default_levels)
    volatility: Volatility = Field(default_factory=Volatility)
    seed: int = 0

    @field_validator("group_mix")
    @classmethod
    def _check_mix(cls, mix: dict[int, float]) -> dict[int, float]:
        known = {int(rule.group) for rule in DEFAULT_RULES}
        if not mix:
            raise ValueError("group_mix must not be empty")
        unknown = sorted(set(mix) - known)
        if unknown:
            raise ValueError(f"group_mix names unknown groups {unknown}")
        if any(p <= 0.0 for p in mix.values()):
            raise ValueError("group_mix proportions must be positive")
        if abs(sum(mix.values()) - 1.0) > 1e-9:
            raise ValueError(f"group_mix proportions sum to {sum(mix.values())}, not 1")
        return mix

    @model_validator(mode="after")
    def _check_levels(self) -> SyntheticPoolSpec:
        missing = sorted(set(self.group_mix) - set(self.demand))
        if missing:
            raise ValueError(f"no demand level for groups {missing}")
        return self


def group_counts(n: int, mix: dict[int, float]) -> dict[int, int]:
    """Split ``n`` profiles over groups by largest remainder, ties to the lower group id."""

    groups = sorted(mix)
    raw = np.array([n * mix[g] for g in groups])
    counts = np.floor(raw).astype(int)
    order = sorted(range(len(groups)), key=lambda i: (-(raw[i] - counts[i]), groups[i]))
    for i in order[: n - int(counts.sum())]:
        counts[i] += 1
    return {g: int(c) for g, c in zip(groups, counts, strict=True)}


def _daily_shape(group: GroupId, rng: np.random.Generator) -> FloatArray:
    attrs = representative_attributes(group)
    morning = rng.uniform(0.6, 1.4) * np.exp(-0.5 * ((_SLOTS - rng.normal(16.0, 1.5)) / 2.5) ** 2)
    evening = rng.uniform(1.0, 2.2) * np.exp(-0.5 * ((_SLOTS - rng.normal(37.0, 1.5)) / 3.0) ** 2)
    shape = rng.uniform(0.25, 0.55) + morning + evening
    if attrs.profile_class == 2:
        shape[_STORAGE_SLOTS] += rng.uniform(0.6, 1.2)
    if attrs.has_pv:
        shape[_PV_SLOTS] *= rng.uniform(0.4, 0.8)
    return shape / shape.sum()


def synthesize_profile(
    profile_id: str,
    group: GroupId,
    level: float,
    spec: SyntheticPoolSpec,
    rng: np.random.Generator,
) -> MonitoredProfile:
    """One profile whose expected mean daily demand is proportional to ``level``."""

    vol = spec.volatility
    shape = _daily_shape(group, rng)

    dates = [spec.start_date + timedelta(days=d) for d in range(spec.days)]
    day_of_year = np.array([d.timetuple().tm_yday for d in dates], dtype=float)
    seasonal = 1.0 + vol.seasonal_amplitude * np.cos(2.0 * np.pi * (day_of_year - 15.0) / 365.25)
    weekend = np.where([d.weekday() >= 5 for d in dates], vol.weekend_factor, 1.0)
    day_factor = seasonal * weekend
    day_level = level * day_factor / day_factor.mean()

    noise = rng.lognormal(-0.5 * vol.noise_sigma**2, vol.noise_sigma, (spec.days, SLOTS_PER_DAY))
    values = day_level[:, np.newaxis] * shape[np.newaxis, :] * noise

    spikes = rng.random(values.shape) < vol.spike_rate
    sizes = rng.uniform(1.0, 3.0, values.shape) * vol.spike_scale * level / SLOTS_PER_DAY
    values = np.clip(values + np.where(spikes, sizes, 0.0), 0.0, None)

    return MonitoredProfile(
        profile_id=profile_id,
        series=HalfHourlySeries(start_date=spec.start_date, values=values.ravel()),
        group=group,
    )


def generate_pool(spec: SyntheticPoolSpec) -> list[MonitoredProfile]:
    """Reproducible pool for ``spec``; profile ``i`` draws from its own child generator."""

    if spec.n_profiles == 0:
        return []

    rng = np.random.default_rng(spec.seed)
    counts = group_counts(spec.n_profiles, spec.group_mix)
    groups = np.repeat(sorted(counts), [counts[g] for g in sorted(counts)])
    groups = rng.permutation(groups)
    children = np.random.SeedSequence(spec.seed).spawn(spec.n_profiles)
    width = max(4, len(str(spec.n_profiles)))

    profiles = []
    for i, (group, child) in enumerate(zip(groups, children, strict=True)):
        dist = spec.demand[int(group)]
        level = float(rng.lognormal(np.log(dist.median), dist.sigma))
        profiles.append(
            synthesize_profile(
                f"P{i + 1:0{width}d}",
                GroupId(int(group)),
                level,
                spec,
                np.random.default_rng(child),
            )
        )

    logger.info(
        "Synthetic pool generated",
        extra={"profiles": len(profiles), "days": spec.days, "seed": spec.seed},
    )
    return profiles
