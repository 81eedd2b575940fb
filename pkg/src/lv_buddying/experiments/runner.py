"""Dispatch one buddying method and score it on a held-out window."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from datetime import date

from lv_buddying.domain.series import HalfHourlySeries
from lv_buddying.domain.types import (
    BuddyAssignment,
    BuddyMethod,
    Feeder,
    MonitoredProfile,
    TrainingWindow,
)
from lv_buddying.errors import CoverageError
from lv_buddying.methods.candidates import ProfilePool
from lv_buddying.methods.genetic import GaConfig, evolve, window_bounds
from lv_buddying.methods.monte_carlo import DEFAULT_SAMPLES, monte_carlo_buddy
from lv_buddying.methods.simple import simple_buddy
from lv_buddying.metrics.reports import FeederErrorReport, evaluate_assignment


@dataclass(frozen=True, slots=True)
class MethodSettings:
    """Method parameters shared by every cell of a run."""

    ga: GaConfig = field(default_factory=GaConfig)
    mc_samples: int = DEFAULT_SAMPLES


def _require(series: HalfHourlySeries | None, start: date, end: date, what: str) -> None:
    if series is None:
        raise CoverageError(f"{what} has no readings")
    if not series.covers(start, end):
        raise CoverageError(
            f"{what} covers {series.start_date}..{series.end_date}, not {start}..{end}"
        )


def check_coverage(
    feeder: Feeder,
    pool: ProfilePool,
    test_start: date,
    test_end: date,
    training_window: TrainingWindow | None = None,
) -> None:
    """Fail fast, before any training, when a cell cannot be trained or scored."""

    spans = [(test_start, test_end)]
    if training_window is not None:
        spans.append(window_bounds(training_window))
    for start, end in spans:
        _require(feeder.substation_series, start, end, f"feeder {feeder.feeder_id}")
        for profile in pool:
            _require(profile.series, start, end, f"profile {profile.profile_id}")


def run_method(
    method: BuddyMethod,
    feeder: Feeder,
    pool: ProfilePool,
    training_window: TrainingWindow | None,
    *,
    weight: float,
    seed: int,
    settings: MethodSettings,
) -> BuddyAssignment:
    if method is BuddyMethod.SIMPLE:
        return simple_buddy(feeder, pool)
    if training_window is None:
        raise CoverageError(f"method {method.value} needs a training window")
    if method is BuddyMethod.GA:
        config = settings.ga.model_copy(update={"weight": weight, "seed": seed})
        return evolve(feeder, pool, training_window, config)
    assignment, _ = monte_carlo_buddy(feeder, pool, training_window, settings.mc_samples, seed)
    return assignment


def train_and_score(
    method: BuddyMethod,
    feeder: Feeder,
    pool: ProfilePool,
    training_window: TrainingWindow | None,
    test_start: date,
    test_end: date,
    *,
    weight: float,
    seed: int,
    settings: MethodSettings,
    true_profiles: Mapping[str, MonitoredProfile] | None = None,
) -> tuple[BuddyAssignment, FeederErrorReport]:
    check_coverage(feeder, pool, test_start, test_end, training_window)
    assignment = run_method(
        method, feeder, pool, training_window, weight=weight, seed=seed, settings=settings
    )
    report = evaluate_assignment(
        feeder, pool, assignment, test_start, test_end, true_profiles=true_profiles
    )
    return assignment, report
