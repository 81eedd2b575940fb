"""Write pools and feeders in the loader formats, so synthetic data round-trips through them."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from datetime import timedelta
from pathlib import Path

import numpy as np
import pandas as pd

from lv_buddying.domain.series import SLOTS_PER_DAY, HalfHourlySeries
from lv_buddying.domain.types import Feeder, MonitoredProfile
from lv_buddying.grouping import CustomerAttributes, GroupId, representative_attributes
from lv_buddying.ingestion.cleaning import Quality
from lv_buddying.ingestion.loaders import ATTRIBUTE_COLUMNS, CUSTOMER_COLUMNS

AttributeSource = Callable[[GroupId], CustomerAttributes]


def _reading_frame(entity_id: str, series: HalfHourlySeries) -> pd.DataFrame:
    days = series.days
    dates = [
        (series.start_date + timedelta(days=d)).isoformat()
        for d in range(days)
        for _ in range(SLOTS_PER_DAY)
    ]
    return pd.DataFrame(
        {
            "entity_id": entity_id,
            "date": dates,
            "slot": np.tile(np.arange(SLOTS_PER_DAY), days),
            "kwh": series.values,
            "flag": Quality.OK.value,
        }
    )


def _write(frames: list[pd.DataFrame], columns: Iterable[str], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=list(columns))
    frame.to_csv(path, index=False)


def write_profiles_csv(profiles: Iterable[MonitoredProfile], path: Path) -> None:
    frames = [_reading_frame(p.profile_id, p.series) for p in profiles]
    _write(frames, ["entity_id", "date", "slot", "kwh", "flag"], path)


def write_substations_csv(feeders: Iterable[Feeder], path: Path) -> None:
    frames: list[pd.DataFrame] = []
    for feeder in feeders:
        if feeder.substation_series is not None:
            frames.append(_reading_frame(feeder.feeder_id, feeder.substation_series))
        for phase, series in sorted(feeder.phase_series.items()):
            frames.append(_reading_frame(f"{feeder.feeder_id}/{phase}", series))
    _write(frames, ["entity_id", "date", "slot", "kwh", "flag"], path)


def _attribute_row(attrs: CustomerAttributes) -> dict[str, object]:
    return {
        "profile_class": attrs.profile_class,
        "council_tax_band": attrs.council_tax_band or "",
        "has_pv": "Y" if attrs.has_pv else "N",
    }


def write_profile_attributes_csv(
    profiles: Iterable[MonitoredProfile],
    path: Path,
    attributes_of: AttributeSource = representative_attributes,
) -> None:
    rows = [
        {"profile_id": p.profile_id, **_attribute_row(attributes_of(p.group))} for p in profiles
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=list(ATTRIBUTE_COLUMNS)).to_csv(path, index=False)


def write_customers_csv(
    feeders: Iterable[Feeder],
    path: Path,
    attributes_of: AttributeSource = representative_attributes,
) -> None:
    rows = [
        {
            "customer_id": c.customer_id,
            "feeder_id": feeder.feeder_id,
            "phase": "" if c.phase is None else c.phase,
            **_attribute_row(attributes_of(c.group)),
            "mean_daily_kwh": repr(c.mean_daily_demand),
            "monitored_profile_id": c.monitored_profile or "",
        }
        for feeder in feeders
        for c in feeder.customers
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=list(CUSTOMER_COLUMNS)).to_csv(path, index=False)
