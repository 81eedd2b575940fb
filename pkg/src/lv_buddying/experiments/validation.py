"""Sweeps over pseudo-feeder suites, where every customer's true profile is known."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from lv_buddying.experiments.reports import write_sweep
from lv_buddying.experiments.runner import MethodSettings
from lv_buddying.experiments.sweep import SweepReport, SweepSpec, run_sweep
from lv_buddying.pseudo.feeders import recovery_rate
from lv_buddying.pseudo.storage import PseudoSuite

logger = logging.getLogger(__name__)

SURFACE_KEYS = ["method", "season", "weeks", "weight"]
INTERMEDIATE_WEIGHTS = (0.1, 0.2, 0.3, 0.4, 0.5)


@dataclass(frozen=True, slots=True)
class ValidationReport:
    sweep: SweepReport
    per_feeder: pd.DataFrame
    recovery_surface: pd.DataFrame
    individual_error_surface: pd.DataFrame


def _per_feeder(suite: PseudoSuite, report: SweepReport) -> pd.DataFrame:
    by_id = {p.feeder_id: p for p in suite.feeders}
    rows = []
    for o in sorted(report.outcomes, key=lambda o: o.cell.sort_key()):
        rows.append(
            {
                "feeder_id": o.cell.feeder_id,
                "method": o.cell.method.value,
                "season": "" if o.cell.season is None else o.cell.season.isoformat(),
                "weeks": "" if o.cell.weeks is None else str(o.cell.weeks),
                "weight": o.cell.weight,
                "n_customers": o.report.n_customers,
                "recovery_rate": recovery_rate(by_id[o.cell.feeder_id], o.assignment),
                "mean_individual_rmae": o.report.mean_individual_rmae,
                "rmae": o.report.rmae,
            }
        )
    return pd.DataFrame(rows)


def _surface(per_feeder: pd.DataFrame, column: str) -> pd.DataFrame:
    if per_feeder.empty:
        return pd.DataFrame(columns=[*SURFACE_KEYS, f"mean_{column}", "n_feeders"])
    return (
        per_feeder.groupby(SURFACE_KEYS, sort=True)
        .agg(**{f"mean_{column}": (column, "mean"), "n_feeders": ("feeder_id", "nunique")})
        .reset_index()
    )


def intermediate_weight_wins(surface: pd.DataFrame) -> bool | None:
    """Whether some weight in 0.1..0.5 beats both w = 0 and w = 1 on individual error.

    Compared per (season, weeks) for the GA; true if any window shows it. ``None`` when the
    surface lacks the weights needed to tell.
    """

    ga = surface[surface["method"] == "ga"]
    column = "mean_mean_individual_rmae"
    found = False
    for _, window in ga.groupby(["season", "weeks"], sort=True):
        by_weight = dict(zip(window["weight"].round(6), window[column], strict=True))
        if 0.0 not in by_weight or 1.0 not in by_weight:
            continue
        inner = [by_weight[w] for w in INTERMEDIATE_WEIGHTS if w in by_weight]
        if not inner:
            continue
        found = True
        if min(inner) <= min(by_weight[0.0], by_weight[1.0]):
            return True
    return False if found else None


def validate_suite(
    suite: PseudoSuite,
    spec: SweepSpec,
    *,
    settings: MethodSettings | None = None,
    master_seed: int = 0,
    workers: int = 1,
) -> ValidationReport:
    """Run ``spec`` over the suite, buddying from its pool and scoring against known truth."""

    truth = {p.feeder_id: dict(p.generating) for p in suite.feeders}
    report = run_sweep(
        spec,
        [p.feeder for p in suite.feeders],
        suite.pool,
        settings=settings,
        master_seed=master_seed,
        workers=workers,
        truth=truth,
    )
    per_feeder = _per_feeder(suite, report)
    return ValidationReport(
        sweep=report,
        per_feeder=per_feeder,
        recovery_surface=_surface(per_feeder, "recovery_rate"),
        individual_error_surface=_surface(per_feeder, "mean_individual_rmae"),
    )


def write_validation(validation: ValidationReport, out_dir: Path) -> None:
    write_sweep(validation.sweep, out_dir)
    validation.per_feeder.to_csv(out_dir / "pseudo_feeders.csv", index=False)
    validation.recovery_surface.to_csv(out_dir / "recovery_surface.csv", index=False)
    validation.individual_error_surface.to_csv(
        out_dir / "individual_error_surface.csv", index=False
    )
    verdict = intermediate_weight_wins(validation.individual_error_surface)
    if verdict is False:
        logger.warning(
            "No intermediate weight beats both w = 0 and w = 1 on individual error; "
            "see individual_error_surface.csv",
            extra={"path": str(out_dir)},
        )
    elif verdict:
        logger.info("An intermediate weight minimises individual error")
