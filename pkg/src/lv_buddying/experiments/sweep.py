"""Season × weeks × weight sweeps over many feeders.

Every cell trains one method on one feeder and scores the result on the test window. Cells are
independent: each has its own seed derived from the master seed and its coordinates, so the
results do not depend on execution order or on the number of worker processes.
"""

from __future__ import annotations

import logging
import multiprocessing as mp
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import date

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lv_buddying.domain.types import (
    BuddyAssignment,
    BuddyMethod,
    Feeder,
    MonitoredProfile,
    TrainingWindow,
)
from lv_buddying.errors import CoverageError, DegenerateNormalizationError, WindowRangeError
from lv_buddying.experiments.runner import MethodSettings, train_and_score
from lv_buddying.experiments.seeds import derive_seed
from lv_buddying.methods.candidates import ProfilePool
from lv_buddying.methods.monte_carlo import DEFAULT_SAMPLES
from lv_buddying.metrics.reports import FeederErrorReport

logger = logging.getLogger(__name__)

DEFAULT_SEASONS = (
    date(2014, 3, 24),
    date(2014, 6, 23),
    date(2014, 9, 29),
    date(2015, 1, 5),
    date(2015, 5, 4),
    date(2015, 7, 27),
)

# Failures that make a single cell unusable without invalidating the run.
SKIPPABLE_ERRORS = (CoverageError, WindowRangeError, DegenerateNormalizationError)

TruthMap = Mapping[str, Mapping[str, MonitoredProfile]]


def _default_weights() -> list[float]:
    return [round(0.1 * i, 1) for i in range(11)]


class SweepSpec(BaseModel):
    """Grid of training windows, weights and methods, plus the held-out test window."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seasons: list[date] = Field(default_factory=lambda: list(DEFAULT_SEASONS), min_length=1)
    weeks: list[int] = Field(default_factory=lambda: list(range(1, 9)), min_length=1)
    weights: list[float] = Field(default_factory=_default_weights, min_length=1)
    methods: list[BuddyMethod] = Field(default_factory=lambda: [BuddyMethod.GA], min_length=1)
    test_start: date = date(2014, 9, 1)
    test_end: date = date(2015, 8, 31)
    mc_samples: int = Field(default=DEFAULT_SAMPLES, ge=1)

    @field_validator("weeks")
    @classmethod
    def _positive_weeks(cls, weeks: list[int]) -> list[int]:
        if any(w < 1 for w in weeks):
            raise ValueError("training windows need at least one week")
        return sorted(set(weeks))

    @field_validator("weights")
    @classmethod
    def _unit_weights(cls, weights: list[float]) -> list[float]:
        if any(not 0.0 <= w <= 1.0 for w in weights):
            raise ValueError("weights must lie in [0, 1]")
        return sorted(set(weights))

    @model_validator(mode="after")
    def _test_window(self) -> SweepSpec:
        if self.test_end < self.test_start:
            raise ValueError(f"test_end {self.test_end} precedes test_start {self.test_start}")
        return self

    def cells(self, feeder_ids: Sequence[str]) -> list[Cell]:
        """All cells, in report order.

        The simple buddy ignores windows and weights, so it gets one cell per feeder (weight
        1). Monte Carlo gets one cell per window (weight 0). The GA gets the full grid.
        """

        out: list[Cell] = []
        for feeder_id in feeder_ids:
            for method in self.methods:
                if method is BuddyMethod.SIMPLE:
                    out.append(Cell(feeder_id, method, None, None, 1.0))
                    continue
                weights = self.weights if method is BuddyMethod.GA else [0.0]
                for season in self.seasons:
                    for weeks in self.weeks:
                        for weight in weights:
                            out.append(Cell(feeder_id, method, season, weeks, weight))
        return sorted(out, key=Cell.sort_key)


@dataclass(frozen=True, slots=True)
class Cell:
    feeder_id: str
    method: BuddyMethod
    season: date | None
    weeks: int | None
    weight: float

    def sort_key(self) -> tuple[str, str, str, int, float]:
        season = "" if self.season is None else self.season.isoformat()
        return (self.feeder_id, self.method.value, season, self.weeks or 0, self.weight)

    @property
    def training_window(self) -> TrainingWindow | None:
        if self.season is None or self.weeks is None:
            return None
        return TrainingWindow(start=self.season, weeks=self.weeks)

    def seed(self, master_seed: int) -> int:
        return derive_seed(
            master_seed, self.feeder_id, self.season, self.weeks, self.weight, self.method
        )


@dataclass(frozen=True, slots=True)
class CellOutcome:
    cell: Cell
    assignment: BuddyAssignment
    report: FeederErrorReport
    seed: int


@dataclass(frozen=True, slots=True)
class SkippedCell:
    cell: Cell
    error: str
    message: str


@dataclass(frozen=True, slots=True)
class SweepReport:
    spec: SweepSpec
    master_seed: int
    outcomes: list[CellOutcome]
    skipped: list[SkippedCell]

    def for_feeder(self, feeder_id: str) -> list[CellOutcome]:
        return [o for o in self.outcomes if o.cell.feeder_id == feeder_id]


class _CellRunner:
    def __init__(
        self,
        feeders: Sequence[Feeder],
        pool: Sequence[MonitoredProfile],
        spec: SweepSpec,
        settings: MethodSettings,
        master_seed: int,
        truth: TruthMap | None,
    ) -> None:
        self.feeders = {f.feeder_id: f for f in feeders}
        self.pool = ProfilePool(pool)
        self.spec = spec
        self.settings = settings
        self.master_seed = master_seed
        self.truth = truth

    def __call__(self, cell: Cell) -> CellOutcome | SkippedCell:
        seed = cell.seed(self.master_seed)
        true_profiles = None if self.truth is None else self.truth.get(cell.feeder_id)
        try:
            assignment, report = train_and_score(
                cell.method,
                self.feeders[cell.feeder_id],
                self.pool,
                cell.training_window,
                self.spec.test_start,
                self.spec.test_end,
                weight=cell.weight,
                seed=seed,
                settings=self.settings,
                true_profiles=true_profiles,
            )
        except SKIPPABLE_ERRORS as e:
            logger.warning(
                "Sweep cell skipped",
                extra={
                    "feeder_id": cell.feeder_id,
                    "method": cell.method.value,
                    "season": cell.season,
                    "weeks": cell.weeks,
                    "weight": cell.weight,
                    "error": type(e).__name__,
                    "reason": str(e),
                },
            )
            return SkippedCell(cell=cell, error=type(e).__name__, message=str(e))
        return CellOutcome(cell=cell, assignment=assignment, report=report, seed=seed)


_worker_runner: _CellRunner | None = None


def _init_worker(*args: object) -> None:
    global _worker_runner
    _worker_runner = _CellRunner(*args)  # type: ignore[arg-type]


def _run_in_worker(cell: Cell) -> CellOutcome | SkippedCell:
    assert _worker_runner is not None, "worker not initialised"
    return _worker_runner(cell)


def _execute(
    cells: Sequence[Cell], runner_args: tuple[object, ...], workers: int
) -> Iterator[CellOutcome | SkippedCell]:
    if workers <= 1 or len(cells) <= 1:
        runner = _CellRunner(*runner_args)  # type: ignore[arg-type]
        yield from map(runner, cells)
        return

    try:
        ctx = mp.get_context("fork")
    except ValueError:
        ctx = mp.get_context("spawn")
    with ProcessPoolExecutor(
        max_workers=workers, mp_context=ctx, initializer=_init_worker, initargs=runner_args
    ) as executor:
        yield from executor.map(_run_in_worker, cells, chunksize=1)


def run_sweep(
    spec: SweepSpec,
    feeders: Sequence[Feeder],
    pool: Sequence[MonitoredProfile],
    *,
    settings: MethodSettings | None = None,
    master_seed: int = 0,
    workers: int = 1,
    truth: TruthMap | None = None,
) -> SweepReport:
    """Train and score every cell of ``spec`` on every feeder.

    Cells whose data does not cover their windows are skipped and listed in the report.
    ``truth`` maps feeder ids to generating profiles, for per-customer errors on pseudo-feeders.
    """

    settings = settings or MethodSettings(mc_samples=spec.mc_samples)
    cells = spec.cells([f.feeder_id for f in feeders])
    logger.info(
        "Sweep started",
        extra={"cells": len(cells), "feeders": len(feeders), "workers": workers},
    )

    args = (list(feeders), list(pool), spec, settings, master_seed, truth)
    outcomes: list[CellOutcome] = []
    skipped: list[SkippedCell] = []
    for result in _execute(cells, args, workers):
        if isinstance(result, SkippedCell):
            skipped.append(result)
        else:
            outcomes.append(result)

    logger.info(
        "Sweep finished", extra={"completed": len(outcomes), "skipped": len(skipped)}
    )
    return SweepReport(spec=spec, master_seed=master_seed, outcomes=outcomes, skipped=skipped)
