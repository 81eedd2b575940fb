"""Load monitored profiles, substation readings and customer registries from CSV.

Reading files (long format, one row per slot)::

    entity_id,date,slot,kwh,flag
    p001,2014-03-20,0,0.132,ok

Rows that are absent are treated as ``missing``. Substation files use the same layout with
``entity_id`` set to ``<feeder_id>`` or ``<feeder_id>/<phase>``.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from lv_buddying.domain.series import SLOTS_PER_DAY, HalfHourlySeries, aggregate
from lv_buddying.domain.types import PHASES, Customer, Feeder, MonitoredProfile, Phase
from lv_buddying.errors import AlignmentError, GroupingError, SchemaError
from lv_buddying.grouping import CustomerAttributes, GroupMapping
from lv_buddying.ingestion.cleaning import FlaggedSeries, Quality, clean_series

logger = logging.getLogger(__name__)

CUSTOMER_COLUMNS = (
    "customer_id",
    "feeder_id",
    "phase",
    "profile_class",
    "council_tax_band",
    "has_pv",
    "mean_daily_kwh",
    "monitored_profile_id",
)
ATTRIBUTE_COLUMNS = ("profile_id", "profile_class", "council_tax_band", "has_pv")


class CsvSchema(BaseModel):
    """Column names of a reading file, for sources that label them differently."""

    model_config = ConfigDict(frozen=True)

    entity_id: str = "entity_id"
    date: str = "date"
    slot: str = "slot"
    kwh: str = "kwh"
    flag: str = "flag"
    date_format: str = "%Y-%m-%d"


def _read_csv(path: Path) -> pd.DataFrame | None:
    if not path.exists():
        raise SchemaError(path, None, "file does not exist")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        return None
    except pd.errors.ParserError as e:
        raise SchemaError(path, None, str(e)) from e


def _first_bad_row(mask: pd.Series) -> int:
    # +1: rows are reported 1-based, header excluded.
    return int(np.flatnonzero(mask.to_numpy())[0]) + 1


def _parse_float(text: str) -> float:
    # Exact inverse of the shortest repr the writers emit.
    try:
        return float(text)
    except ValueError:
        return float("nan")


@dataclass(frozen=True, slots=True)
class RawReadingTable:
    """Parsed reading rows: entity id, calendar date, slot of day, kWh and quality flag."""

    path: Path
    frame: pd.DataFrame

    @classmethod
    def read(cls, path: Path, schema: CsvSchema | None = None) -> RawReadingTable:
        schema = schema or CsvSchema()
        raw = _read_csv(path)
        columns = ["entity_id", "date", "slot", "kwh", "flag"]
        if raw is None:
            return cls(path=path, frame=pd.DataFrame(columns=columns))

        mapping = {
            schema.entity_id: "entity_id",
            schema.date: "date",
            schema.slot: "slot",
            schema.kwh: "kwh",
        }
        missing = [src for src in mapping if src not in raw.columns]
        if missing:
            raise SchemaError(path, None, f"missing columns {missing}")
        frame = raw.rename(columns=mapping)
        if schema.flag in raw.columns:
            frame = frame.rename(columns={schema.flag: "flag"})
        else:
            frame["flag"] = Quality.OK.value

        parsed_dates = pd.to_datetime(frame["date"], format=schema.date_format, errors="coerce")
        if parsed_dates.isna().any():
            raise SchemaError(path, _first_bad_row(parsed_dates.isna()), "unparseable date")

        slots = pd.to_numeric(frame["slot"], errors="coerce")
        bad_slot = slots.isna() | (slots % 1 != 0) | (slots < 0) | (slots >= SLOTS_PER_DAY)
        if bad_slot.any():
            raise SchemaError(path, _first_bad_row(bad_slot), "slot must be an integer in 0..47")

        flags = frame["flag"].str.strip().str.lower().replace("", Quality.OK.value)
        bad_flag = ~flags.isin([q.value for q in Quality])
        if bad_flag.any():
            raise SchemaError(path, _first_bad_row(bad_flag), "flag must be ok, missing or outlier")

        kwh_text = frame["kwh"].str.strip()
        kwh = kwh_text.map(_parse_float)
        bad_kwh = kwh.isna() & (kwh_text != "") & (flags == Quality.OK.value)
        if bad_kwh.any():
            raise SchemaError(path, _first_bad_row(bad_kwh), "kwh is not a number")
        flags = flags.where(kwh.notna(), Quality.MISSING.value)

        table = pd.DataFrame(
            {
                "entity_id": frame["entity_id"].str.strip(),
                "date": parsed_dates.dt.date,
                "slot": slots.astype(int),
                "kwh": kwh.astype(float),
                "flag": flags,
            }
        )
        duplicated = table.duplicated(subset=["entity_id", "date", "slot"])
        if duplicated.any():
            raise SchemaError(path, _first_bad_row(duplicated), "duplicate reading for slot")
        return cls(path=path, frame=table)

    @property
    def empty(self) -> bool:
        return self.frame.empty

    def flagged_series(self) -> dict[str, FlaggedSeries]:
        """One gap-filled flagged series per entity, spanning its first to last day."""

        out: dict[str, FlaggedSeries] = {}
        for entity_id, rows in self.frame.groupby("entity_id", sort=True):
            first: date = min(rows["date"])
            last: date = max(rows["date"])
            days = (last - first).days + 1
            values = np.full(days * SLOTS_PER_DAY, np.nan)
            flags = np.full(days * SLOTS_PER_DAY, Quality.MISSING.value)
            offsets = np.array([(d - first).days for d in rows["date"]]) * SLOTS_PER_DAY
            positions = offsets + rows["slot"].to_numpy()
            values[positions] = rows["kwh"].to_numpy()
            flags[positions] = rows["flag"].to_numpy()
            out[str(entity_id)] = FlaggedSeries(start_date=first, values=values, flags=flags)
        return out


def load_profiles(
    path: Path,
    attributes: Mapping[str, CustomerAttributes],
    schema: CsvSchema | None = None,
    *,
    mapping: GroupMapping | None = None,
) -> list[MonitoredProfile]:
    """Load, clean and group monitored profiles; entities that cannot be used are skipped."""

    table = RawReadingTable.read(path, schema)
    if table.empty:
        logger.warning("Profile file has no readings", extra={"path": str(path)})
        return []

    mapping = mapping or GroupMapping()
    profiles: list[MonitoredProfile] = []
    for entity_id, raw in table.flagged_series().items():
        n_valid = int(raw.valid_mask().sum())
        if n_valid < SLOTS_PER_DAY:
            logger.warning(
                "Rejected profile with less than one day of valid data",
                extra={"profile_id": entity_id, "valid_readings": n_valid},
            )
            continue
        attrs = attributes.get(entity_id)
        if attrs is None:
            logger.warning(
                "Rejected profile without customer attributes", extra={"profile_id": entity_id}
            )
            continue
        profiles.append(
            MonitoredProfile(
                profile_id=entity_id, series=clean_series(raw), group=mapping.assign(attrs)
            )
        )

    logger.info("Loaded monitored profiles", extra={"path": str(path), "count": len(profiles)})
    return profiles


def load_substations(path: Path, schema: CsvSchema | None = None) -> dict[str, HalfHourlySeries]:
    """Cleaned substation series keyed by ``feeder_id`` or ``feeder_id/phase``."""

    table = RawReadingTable.read(path, schema)
    if table.empty:
        logger.warning("Substation file has no readings", extra={"path": str(path)})
        return {}
    return {key: clean_series(raw) for key, raw in table.flagged_series().items()}


def _require_columns(path: Path, frame: pd.DataFrame, columns: Sequence[str]) -> None:
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise SchemaError(path, None, f"missing columns {missing}")


def load_profile_attributes(path: Path) -> dict[str, CustomerAttributes]:
    """Monitored-profile attributes from ``profile_id,profile_class,council_tax_band,has_pv``."""

    frame = _read_csv(path)
    if frame is None:
        return {}
    _require_columns(path, frame, ATTRIBUTE_COLUMNS)
    out: dict[str, CustomerAttributes] = {}
    for idx, row in enumerate(frame.itertuples(index=False), start=1):
        try:
            out[str(row.profile_id).strip()] = CustomerAttributes.parse(
                row.profile_class, row.council_tax_band, row.has_pv
            )
        except GroupingError as e:
            raise SchemaError(path, idx, str(e)) from e
    return out


def registry_profile_attributes(path: Path) -> dict[str, CustomerAttributes]:
    """Attributes of monitored profiles that appear as customers in a registry."""

    frame = _read_csv(path)
    if frame is None:
        return {}
    _require_columns(path, frame, CUSTOMER_COLUMNS[:-1])
    if "monitored_profile_id" not in frame.columns:
        return {}
    out: dict[str, CustomerAttributes] = {}
    for idx, row in enumerate(frame.itertuples(index=False), start=1):
        profile_id = str(row.monitored_profile_id).strip()
        if not profile_id:
            continue
        try:
            out[profile_id] = CustomerAttributes.parse(
                row.profile_class, row.council_tax_band, row.has_pv
            )
        except GroupingError as e:
            raise SchemaError(path, idx, str(e)) from e
    return out


def _parse_phase(path: Path, row: int, value: str) -> Phase | None:
    text = value.strip()
    if not text:
        return None
    for phase in PHASES:
        if text == str(phase):
            return phase
    raise SchemaError(path, row, f"phase must be 1, 2 or 3, got {value!r}")


def load_customers(
    path: Path,
    profiles: Sequence[MonitoredProfile],
    *,
    mapping: GroupMapping | None = None,
    strict: bool = False,
) -> dict[str, list[Customer]]:
    """Registry rows grouped by feeder, in file order.

    Monitored customers take their mean daily demand (and group) from their own profile.
    """

    frame = _read_csv(path)
    if frame is None:
        logger.warning("Customer registry is empty", extra={"path": str(path)})
        return {}
    _require_columns(path, frame, CUSTOMER_COLUMNS[:-1])
    if "monitored_profile_id" not in frame.columns:
        frame["monitored_profile_id"] = ""

    mapping = mapping or GroupMapping()
    by_id = {p.profile_id: p for p in profiles}
    feeders: dict[str, list[Customer]] = {}
    for idx, row in enumerate(frame.itertuples(index=False), start=1):
        customer_id = str(row.customer_id).strip()
        feeder_id = str(row.feeder_id).strip()
        if not customer_id or not feeder_id:
            raise SchemaError(path, idx, "customer_id and feeder_id are required")
        phase = _parse_phase(path, idx, str(row.phase))
        try:
            attrs = CustomerAttributes.parse(row.profile_class, row.council_tax_band, row.has_pv)
            group = mapping.assign(attrs, strict=strict)
        except GroupingError as e:
            raise SchemaError(path, idx, str(e)) from e

        profile_id = str(row.monitored_profile_id).strip()
        profile = by_id.get(profile_id) if profile_id else None
        if profile_id and profile is None:
            logger.warning(
                "Monitored profile not loaded; treating customer as unmonitored",
                extra={"customer_id": customer_id, "profile_id": profile_id},
            )

        if profile is not None:
            if profile.group != group:
                logger.warning(
                    "Registry group differs from monitored profile group; using the profile's",
                    extra={
                        "customer_id": customer_id,
                        "registry_group": int(group),
                        "profile_group": int(profile.group),
                    },
                )
            customer = Customer.monitored(customer_id, profile, phase=phase)
        else:
            try:
                mean = float(row.mean_daily_kwh)
            except ValueError as e:
                raise SchemaError(path, idx, "mean_daily_kwh is not a number") from e
            if not np.isfinite(mean) or mean < 0:
                raise SchemaError(path, idx, "mean_daily_kwh must be a finite value >= 0")
            customer = Customer(
                customer_id=customer_id, group=group, mean_daily_demand=mean, phase=phase
            )
        feeders.setdefault(feeder_id, []).append(customer)
    return feeders


def load_feeders(
    customers_path: Path,
    profiles: Sequence[MonitoredProfile],
    substations_path: Path | None = None,
    *,
    mapping: GroupMapping | None = None,
    schema: CsvSchema | None = None,
) -> list[Feeder]:
    """Assemble feeders from a registry and (optionally) substation readings."""

    customers = load_customers(customers_path, profiles, mapping=mapping)
    readings = load_substations(substations_path, schema) if substations_path else {}

    feeders: list[Feeder] = []
    for feeder_id in sorted(customers):
        phase_series: dict[Phase, HalfHourlySeries] = {
            phase: readings[f"{feeder_id}/{phase}"]
            for phase in PHASES
            if f"{feeder_id}/{phase}" in readings
        }
        substation = readings.get(feeder_id)
        if substation is None and len(phase_series) == len(PHASES):
            try:
                substation = aggregate(list(phase_series.values()))
                logger.info(
                    "Feeder series built from its phase series", extra={"feeder_id": feeder_id}
                )
            except AlignmentError:
                logger.warning(
                    "Phase series are not aligned; feeder has no substation series",
                    extra={"feeder_id": feeder_id},
                )
        feeders.append(
            Feeder(
                feeder_id=feeder_id,
                customers=tuple(customers[feeder_id]),
                substation_series=substation,
                phase_series=phase_series,
            )
        )
    return feeders
