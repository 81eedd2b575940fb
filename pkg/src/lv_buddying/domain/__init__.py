"""Domain model shared by every other module. No I/O lives here."""

from lv_buddying.domain.series import (
    SLOTS_PER_DAY,
    SLOTS_PER_WEEK,
    HalfHourlySeries,
    aggregate,
    mean_daily_demand,
    slice_days,
    window,
)
from lv_buddying.domain.types import (
    PHASES,
    BuddyAssignment,
    BuddyMethod,
    Customer,
    Feeder,
    MonitoredProfile,
    Phase,
    TrainingWindow,
)

__all__ = [
    "PHASES",
    "SLOTS_PER_DAY",
    "SLOTS_PER_WEEK",
    "BuddyAssignment",
    "BuddyMethod",
    "Customer",
    "Feeder",
    "HalfHourlySeries",
    "MonitoredProfile",
    "Phase",
    "TrainingWindow",
    "aggregate",
    "mean_daily_demand",
    "slice_days",
    "window",
]
