"""Buddying each phase separately, then scoring the combined assignment at feeder level."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from datetime import date
from typing import cast

import numpy as np
import pandas as pd

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
from lv_buddying.errors import CoverageError, InvalidInputError
from lv_buddying.experiments.runner import MethodSettings, check_coverage, run_method
from lv_buddying.experiments.seeds import derive_seed
from lv_buddying.experiments.sweep import SKIPPABLE_ERRORS
from lv_buddying.methods.candidates import ProfilePool
from lv_buddying.metrics.reports import FeederErrorReport, evaluate_assignment

logger = logging.getLogger(__name__)

DEFAULT_SIZE_RANGE = (16, 36)


@dataclass(frozen=True, slots=True)
class PhaseModeResult:
    feeder_assignment: BuddyAssignment
    feeder_report: FeederErrorReport
    phase_assignment: BuddyAssignment
    """Per-phase assignments merged into one for the whole feeder."""
    phase_report: FeederErrorReport
    phase_level: dict[Phase, FeederErrorReport]
    """Each phase's own assignment scored against its phase readings."""
    randomly_allocated: bool


def allocate_phases(feeder: Feeder, seed: int) -> tuple[Feeder, bool]:
    """Give unlabelled customers a uniformly random phase."""

    unlabelled = [c for c in feeder.customers if c.phase is None]
    if not unlabelled:
        return feeder, False
    logger.warning(
        "Customers without phase labels allocated to random phases",
        extra={"feeder_id": feeder.feeder_id, "customers": len(unlabelled)},
    )
    rng = np.random.default_rng(seed)
    draws = iter(rng.integers(1, 4, size=len(unlabelled)).tolist())
    customers = tuple(
        c if c.phase is not None else replace(c, phase=cast(Phase, next(draws)))
        for c in feeder.customers
    )
    return replace(feeder, customers=customers, phase_series=dict(feeder.phase_series)), True


def _phase_feeders(feeder: Feeder) -> dict[Phase, Feeder]:
    members: dict[Phase, list[Customer]] = {}
    for c in feeder.customers:
        assert c.phase is not None
        members.setdefault(c.phase, []).append(c)
    out: dict[Phase, Feeder] = {}
    for phase in PHASES:
        if phase not in members:
            continue
        series = feeder.phase_series.get(phase)
        if series is None:
            raise CoverageError(f"feeder {feeder.feeder_id} has no readings for phase {phase}")
        out[phase] = Feeder(
            feeder_id=f"{feeder.feeder_id}/{phase}",
            customers=tuple(members[phase]),
            substation_series=series,
        )
    return out


def run_phase_mode(
    feeder: Feeder,
    pool: ProfilePool | Sequence[MonitoredProfile],
    training_window: TrainingWindow | None,
    test_start: date,
    test_end: date,
    *,
    method: BuddyMethod,
    weight: float,
    seed: int,
    settings: MethodSettings | None = None,
) -> PhaseModeResult:
    """Buddy the feeder whole and phase by phase; score both on the test window."""

    pool = ProfilePool.of(pool)
    settings = settings or MethodSettings()
    check_coverage(feeder, pool, test_start, test_end, training_window)

    feeder_assignment = run_method(
        method, feeder, pool, training_window, weight=weight, seed=seed, settings=settings
    )
    feeder_report = evaluate_assignment(feeder, pool, feeder_assignment, test_start, test_end)

    labelled, randomly_allocated = allocate_phases(feeder, derive_seed(seed, "phases"))
    used = {c.phase for c in labelled.customers}
    if len(used) == 1:
        (phase,) = used
        assert phase is not None
        return PhaseModeResult(
            feeder_assignment=feeder_assignment,
            feeder_report=feeder_report,
            phase_assignment=feeder_assignment,
            phase_report=feeder_report,
            phase_level={phase: feeder_report},
            randomly_allocated=randomly_allocated,
        )

    profiles: dict[str, str] = {}
    phase_level: dict[Phase, FeederErrorReport] = {}
    for phase, sub in _phase_feeders(labelled).items():
        check_coverage(sub, pool, test_start, test_end, training_window)
        assignment = run_method(
            method,
            sub,
            pool,
            training_window,
            weight=weight,
            seed=derive_seed(seed, "phase", phase),
            settings=settings,
        )
        profiles.update(assignment.profiles)
        phase_level[phase] = evaluate_assignment(sub, pool, assignment, test_start, test_end)

    merged = {c.customer_id: profiles[c.customer_id] for c in feeder.customers}
    phase_assignment = feeder_assignment.model_copy(update={"profiles": merged, "fitness": None})
    phase_report = evaluate_assignment(feeder, pool, phase_assignment, test_start, test_end)
    return PhaseModeResult(
        feeder_assignment=feeder_assignment,
        feeder_report=feeder_report,
        phase_assignment=phase_assignment,
        phase_report=phase_report,
        phase_level=phase_level,
        randomly_allocated=randomly_allocated,
    )


@dataclass(frozen=True, slots=True)
class PhaseComparison:
    rows: pd.DataFrame
    size_matched: pd.DataFrame


def run_phase_comparison(
    feeders: Sequence[Feeder],
    pool: Sequence[MonitoredProfile],
    training_window: TrainingWindow | None,
    test_start: date,
    test_end: date,
    *,
    method: BuddyMethod,
    weights: Sequence[float],
    master_seed: int,
    settings: MethodSettings | None = None,
    size_range: tuple[int, int] = DEFAULT_SIZE_RANGE,
) -> PhaseComparison:
    """Feeder-level against phase-level buddying for every feeder and weight."""

    profile_pool = ProfilePool(pool)
    rows = []
    feeder_points: dict[float, list[tuple[int, float]]] = {}
    phase_points: dict[float, list[tuple[int, float]]] = {}
    for feeder in feeders:
        for weight in weights:
            seed = derive_seed(master_seed, feeder.feeder_id, "phase-compare", weight, method)
            try:
                result = run_phase_mode(
                    feeder,
                    profile_pool,
                    training_window,
                    test_start,
                    test_end,
                    method=method,
                    weight=weight,
                    seed=seed,
                    settings=settings,
                )
            except SKIPPABLE_ERRORS as e:
                logger.warning(
                    "Phase comparison skipped feeder",
                    extra={"feeder_id": feeder.feeder_id, "weight": weight, "reason": str(e)},
                )
                continue
            rows.append(
                {
                    "feeder_id": feeder.feeder_id,
                    "method": method.value,
                    "weight": weight,
                    "n_customers": feeder.n_customers,
                    "rmae_feeder": result.feeder_report.rmae,
                    "rmae_phase": result.phase_report.rmae,
                    "rpde_feeder": result.feeder_report.rpde,
                    "rpde_phase": result.phase_report.rpde,
                    "random_phases": result.randomly_allocated,
                    "seed": seed,
                }
            )
            feeder_points.setdefault(weight, []).append(
                (feeder.n_customers, result.feeder_report.rmae)
            )
            phase_points.setdefault(weight, []).extend(
                (r.n_customers, r.rmae) for r in result.phase_level.values()
            )

    lo, hi = size_range
    matched = [
        size_matched_comparison(feeder_points[w], phase_points.get(w, []), lo, hi).assign(
            weight=w
        )
        for w in sorted(feeder_points)
    ]
    size_matched = (
        pd.concat(matched, ignore_index=True)
        if matched
        else pd.DataFrame(columns=[*_MATCHED_COLUMNS, "weight"])
    )
    return PhaseComparison(rows=pd.DataFrame(rows), size_matched=size_matched)


_MATCHED_COLUMNS = [
    "n",
    "n_feeders",
    "feeder_mean_rmae",
    "n_phases",
    "phase_mean_rmae",
    "difference",
]


def size_matched_comparison(
    feeder_points: Sequence[tuple[int, float]],
    phase_points: Sequence[tuple[int, float]],
    lo: int = DEFAULT_SIZE_RANGE[0],
    hi: int = DEFAULT_SIZE_RANGE[1],
) -> pd.DataFrame:
    """Mean RMAE of feeders and of single phases with ``n`` or ``n + 1`` customers.

    One row per ``n`` in ``[lo, hi]``; buckets with no member carry NaN. ``difference`` is the
    phase mean minus the feeder mean.
    """

    if lo > hi:
        raise InvalidInputError(f"size range {lo}..{hi} is empty")
    feeders = np.array(feeder_points, dtype=float).reshape(-1, 2)
    phases = np.array(phase_points, dtype=float).reshape(-1, 2)

    def bucket(points: np.ndarray, n: int) -> tuple[int, float]:
        mask = (points[:, 0] == n) | (points[:, 0] == n + 1)
        count = int(mask.sum())
        return count, float(points[mask, 1].mean()) if count else float("nan")

    rows = []
    for n in range(lo, hi + 1):
        n_feeders, feeder_mean = bucket(feeders, n)
        n_phases, phase_mean = bucket(phases, n)
        rows.append(
            {
                "n": n,
                "n_feeders": n_feeders,
                "feeder_mean_rmae": feeder_mean,
                "n_phases": n_phases,
                "phase_mean_rmae": phase_mean,
                "difference": phase_mean - feeder_mean,
            }
        )
    return pd.DataFrame(rows, columns=_MATCHED_COLUMNS)
