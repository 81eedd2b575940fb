"""Per-feeder error reports and their CSV/JSON serialisation."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from datetime import date
from pathlib import Path

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field

from lv_buddying.domain.series import aggregate, slice_days
from lv_buddying.domain.types import (
    BuddyAssignment,
    BuddyMethod,
    Feeder,
    MonitoredProfile,
    TrainingWindow,
)
from lv_buddying.errors import ConfigurationError
from lv_buddying.methods.candidates import ProfilePool
from lv_buddying.metrics.accuracy import per_customer_rmae, rmae, rpde


class FeederErrorReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    feeder_id: str
    n_customers: int = Field(ge=1)
    rmae: float = Field(ge=0.0)
    rpde: float = Field(le=1.0)
    method: BuddyMethod
    weight: float
    training_window: TrainingWindow | None = None
    seed: int | None = None
    start: date
    end: date
    per_customer_rmae: list[float] | None = Field(
        default=None, description="Only when customers' true series are known"
    )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def rmae_per_customer(self) -> float:
        return self.rmae / self.n_customers

    @computed_field  # type: ignore[prop-decorator]
    @property
    def rpde_per_customer(self) -> float:
        return self.rpde / self.n_customers

    @computed_field  # type: ignore[prop-decorator]
    @property
    def mean_individual_rmae(self) -> float | None:
        if not self.per_customer_rmae:
            return None
        return sum(self.per_customer_rmae) / len(self.per_customer_rmae)


def evaluate_assignment(
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    assignment: BuddyAssignment,
    start: date,
    end: date,
    *,
    true_profiles: Mapping[str, MonitoredProfile] | None = None,
) -> FeederErrorReport:
    """Score an assignment's aggregate against the feeder's readings over ``[start, end]``.

    ``true_profiles`` maps customer ids to the profiles that generated them (pseudo-feeders);
    when given, the report also carries per-customer RMAE.
    """

    if feeder.substation_series is None:
        raise ConfigurationError(f"feeder {feeder.feeder_id} has no substation series to score")
    pool = ProfilePool.of(pool)
    actual = slice_days(feeder.substation_series, start, end)
    assigned = [pool.series(pid, start, end) for pid in assignment.profile_ids(feeder)]
    modeled = aggregate(assigned)

    individual = None
    if true_profiles is not None:
        truth = [
            slice_days(true_profiles[c.customer_id].series, start, end) for c in feeder.customers
        ]
        individual = per_customer_rmae(truth, assigned)

    return FeederErrorReport(
        feeder_id=feeder.feeder_id,
        n_customers=feeder.n_customers,
        rmae=rmae(actual, modeled),
        rpde=rpde(actual, modeled),
        method=assignment.method,
        weight=assignment.weight,
        training_window=assignment.training_window,
        seed=assignment.seed,
        start=start,
        end=end,
        per_customer_rmae=individual,
    )


def write_reports_json(reports: Iterable[FeederErrorReport], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [r.model_dump(mode="json") for r in reports]
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def write_reports_csv(reports: Iterable[FeederErrorReport], path: Path) -> None:
    rows = []
    for r in reports:
        window = r.training_window
        rows.append(
            {
                "feeder_id": r.feeder_id,
                "method": r.method.value,
                "weight": r.weight,
                "window_start": "" if window is None else window.start.isoformat(),
                "weeks": "" if window is None else window.weeks,
                "n_customers": r.n_customers,
                "rmae": r.rmae,
                "rpde": r.rpde,
                "rmae_per_customer": r.rmae_per_customer,
                "rpde_per_customer": r.rpde_per_customer,
                "mean_individual_rmae": (
                    "" if r.mean_individual_rmae is None else r.mean_individual_rmae
                ),
                "seed": "" if r.seed is None else r.seed,
            }
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(path, index=False)
