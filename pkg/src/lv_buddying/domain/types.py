"""Core value types: monitored profiles, customers, feeders and buddy assignments."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from types import MappingProxyType
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from lv_buddying.domain.series import HalfHourlySeries, mean_daily_demand
from lv_buddying.errors import GroupingError, InvalidInputError
from lv_buddying.grouping import GroupId

Phase = Literal[1, 2, 3]
PHASES: tuple[Phase, ...] = (1, 2, 3)


@dataclass(frozen=True, slots=True)
class MonitoredProfile:
    """A monitored customer's cleaned series with its derived mean daily demand."""

    profile_id: str
    series: HalfHourlySeries
    group: GroupId
    mean_daily_demand: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean_daily_demand", mean_daily_demand(self.series))


@dataclass(frozen=True, slots=True)
class Customer:
    """A customer on a feeder, monitored or not.

    ``mean_daily_demand`` is the quarterly-reading estimate U_j for unmonitored customers; for
    monitored customers it must equal the mean of their own profile, which :meth:`monitored`
    guarantees.
    """

    customer_id: str
    group: GroupId
    mean_daily_demand: float
    monitored_profile: str | None = None
    phase: Phase | None = None

    def __post_init__(self) -> None:
        if not self.mean_daily_demand >= 0.0:
            raise InvalidInputError(
                f"customer {self.customer_id}: mean daily demand must be >= 0, "
                f"got {self.mean_daily_demand}"
            )
        if self.phase is not None and self.phase not in PHASES:
            raise InvalidInputError(f"customer {self.customer_id}: invalid phase {self.phase!r}")

    @classmethod
    def monitored(
        cls, customer_id: str, profile: MonitoredProfile, *, phase: Phase | None = None
    ) -> Customer:
        return cls(
            customer_id=customer_id,
            group=profile.group,
            mean_daily_demand=profile.mean_daily_demand,
            monitored_profile=profile.profile_id,
            phase=phase,
        )


@dataclass(frozen=True, slots=True)
class Feeder:
    """Customers served by one LV feeder, with optional feeder- and phase-head readings."""

    feeder_id: str
    customers: tuple[Customer, ...]
    substation_series: HalfHourlySeries | None = None
    phase_series: Mapping[Phase, HalfHourlySeries] = field(default_factory=dict)

    def __post_init__(self) -> None:
        customers = tuple(self.customers)
        if not customers:
            raise InvalidInputError(f"feeder {self.feeder_id} has no customers")
        ids = [c.customer_id for c in customers]
        if len(set(ids)) != len(ids):
            raise InvalidInputError(f"feeder {self.feeder_id} has duplicate customer ids")
        object.__setattr__(self, "customers", customers)
        object.__setattr__(self, "phase_series", MappingProxyType(dict(self.phase_series)))

    def __reduce__(self) -> tuple[object, ...]:
        # Mapping proxies do not pickle; workers rebuild the feeder from plain values.
        return (
            Feeder,
            (self.feeder_id, self.customers, self.substation_series, dict(self.phase_series)),
        )

    @property
    def n_customers(self) -> int:
        return len(self.customers)

    @property
    def total_mean_daily_demand(self) -> float:
        return float(sum(c.mean_daily_demand for c in self.customers))

    def customer(self, customer_id: str) -> Customer:
        for c in self.customers:
            if c.customer_id == customer_id:
                return c
        raise KeyError(customer_id)


class BuddyMethod(str, Enum):
    SIMPLE = "simple"
    GA = "ga"
    MONTE_CARLO = "monte-carlo"


class TrainingWindow(BaseModel):
    """Start date and length (whole weeks) of the slice a method was trained on."""

    model_config = ConfigDict(frozen=True)

    start: date
    weeks: int = Field(ge=1)


class BuddyAssignment(BaseModel):
    """Which monitored profile stands in for each customer of a feeder, plus provenance."""

    model_config = ConfigDict(frozen=True)

    feeder_id: str
    profiles: dict[str, str] = Field(description="customer_id -> profile_id")
    method: BuddyMethod
    weight: float = Field(ge=0.0, le=1.0)
    training_window: TrainingWindow | None = None
    seed: int | None = None
    fitness: float | None = Field(
        default=None, description="Objective value of the returned assignment, if optimised"
    )

    def profile_for(self, customer_id: str) -> str:
        return self.profiles[customer_id]

    def profile_ids(self, feeder: Feeder) -> list[str]:
        """Assigned profile ids in feeder customer order."""

        return [self.profiles[c.customer_id] for c in feeder.customers]

    def check(self, feeder: Feeder, pool: Iterable[MonitoredProfile]) -> None:
        """Assert the assignment covers exactly the feeder's customers within their groups."""

        groups = {p.profile_id: p.group for p in pool}
        expected = {c.customer_id for c in feeder.customers}
        if set(self.profiles) != expected:
            raise InvalidInputError(
                f"assignment for feeder {self.feeder_id} does not cover exactly its customers"
            )
        for c in feeder.customers:
            profile_id = self.profiles[c.customer_id]
            if groups.get(profile_id) != c.group:
                raise GroupingError(
                    f"customer {c.customer_id} (group {c.group}) assigned profile "
                    f"{profile_id} from group {groups.get(profile_id)}"
                )
