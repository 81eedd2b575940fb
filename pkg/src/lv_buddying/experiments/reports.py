"""Tidy result tables and plot data for sweeps.

``results.csv`` has exactly one row per completed cell, ordered by cell coordinates, so two runs
with the same master seed produce identical bytes.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd

from lv_buddying.errors import FitError, InvalidInputError
from lv_buddying.experiments.sweep import SweepReport
from lv_buddying.metrics.powerlaw import PowerLawFit, fit_power_law

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "feeder_id",
    "method",
    "season",
    "weeks",
    "weight",
    "rmae",
    "rpde",
    "n_customers",
    "seed",
)
CONFIG_COLUMNS = ["method", "season", "weeks", "weight"]

Metric = Literal["rmae", "rpde"]


def _write_json(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_plain(payload), indent=2, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")


def results_frame(report: SweepReport) -> pd.DataFrame:
    rows = [
        {
            "feeder_id": o.cell.feeder_id,
            "method": o.cell.method.value,
            "season": "" if o.cell.season is None else o.cell.season.isoformat(),
            "weeks": "" if o.cell.weeks is None else str(o.cell.weeks),
            "weight": o.cell.weight,
            "rmae": o.report.rmae,
            "rpde": o.report.rpde,
            "n_customers": o.report.n_customers,
            "seed": "" if o.assignment.seed is None else o.assignment.seed,
        }
        for o in sorted(report.outcomes, key=lambda o: o.cell.sort_key())
    ]
    return pd.DataFrame(rows, columns=list(RESULT_COLUMNS))


def read_results(path: Path) -> pd.DataFrame:
    if not path.is_file():
        raise InvalidInputError(f"results file not found: {path}")
    frame = pd.read_csv(
        path, dtype={"feeder_id": str, "season": str, "weeks": str}, keep_default_na=False
    )
    missing = [c for c in RESULT_COLUMNS if c not in frame.columns]
    if missing:
        raise InvalidInputError(f"{path} is missing result columns {missing}")
    return frame


def error_surface(results: pd.DataFrame) -> pd.DataFrame:
    """Mean RMAE and RPDE over feeders for every (method, season, weeks, weight)."""

    if results.empty:
        return pd.DataFrame(columns=[*CONFIG_COLUMNS, "mean_rmae", "mean_rpde", "n_feeders"])
    return (
        results.groupby(CONFIG_COLUMNS, sort=True)
        .agg(
            mean_rmae=("rmae", "mean"),
            mean_rpde=("rpde", "mean"),
            n_feeders=("feeder_id", "nunique"),
        )
        .reset_index()
    )


def rpde_distribution(results: pd.DataFrame) -> pd.DataFrame:
    """Quantiles of RPDE across feeders for every configuration, for box plots."""

    columns = [*CONFIG_COLUMNS, "count", "mean", "min", "q25", "median", "q75", "max"]
    if results.empty:
        return pd.DataFrame(columns=columns)
    grouped = results.groupby(CONFIG_COLUMNS, sort=True)["rpde"]
    out = grouped.agg(
        count="count",
        mean="mean",
        min="min",
        q25=lambda s: s.quantile(0.25),
        median="median",
        q75=lambda s: s.quantile(0.75),
        max="max",
    ).reset_index()
    return out[columns]


def error_vs_size(results: pd.DataFrame) -> pd.DataFrame:
    out = results[["feeder_id", *CONFIG_COLUMNS, "n_customers", "rmae", "rpde"]].copy()
    out["rmae_per_customer"] = out["rmae"] / out["n_customers"]
    out["rpde_per_customer"] = out["rpde"] / out["n_customers"]
    return out


def best_configuration(results: pd.DataFrame, method: str) -> dict[str, Any] | None:
    """Configuration of ``method`` with the lowest mean RMAE over feeders."""

    surface = error_surface(results[results["method"] == method])
    if surface.empty:
        return None
    best = surface.sort_values(["mean_rmae", *CONFIG_COLUMNS], kind="stable").iloc[0]
    return {c: best[c] for c in CONFIG_COLUMNS} | {"mean_rmae": float(best["mean_rmae"])}


def season_summary(results: pd.DataFrame) -> dict[str, Any]:
    """Mean RMAE per training season (windowed methods only) and the best season."""

    windowed = results[results["season"] != ""]
    if windowed.empty:
        return {"by_season": {}, "best_season": None}
    means = windowed.groupby("season", sort=True)["rmae"].mean()
    return {
        "by_season": {str(k): float(v) for k, v in means.items()},
        "best_season": str(means.idxmin()),
    }


def powerlaw_points(
    results: pd.DataFrame,
    *,
    method: str,
    weight: float | None = None,
    season: str | None = None,
    weeks: int | None = None,
    metric: Metric = "rmae",
    per_customer: bool = False,
) -> list[tuple[float, float]]:
    """(feeder size, error) points for one configuration.

    Unspecified coordinates default to the method's best configuration. RPDE is fitted in
    absolute value; non-positive values cannot enter a log-log fit and are dropped.
    """

    rows = results[results["method"] == method]
    if weight is not None:
        rows = rows[np.isclose(rows["weight"].astype(float), weight)]
    if season is not None:
        rows = rows[rows["season"] == season]
    if weeks is not None:
        rows = rows[rows["weeks"].astype(str) == str(weeks)]
    best = best_configuration(rows, method)
    if best is None:
        return []
    rows = rows[
        (rows["season"] == best["season"])
        & (rows["weeks"].astype(str) == str(best["weeks"]))
        & np.isclose(rows["weight"].astype(float), float(best["weight"]))
    ]

    values = rows[metric].astype(float).abs() if metric == "rpde" else rows[metric].astype(float)
    if per_customer:
        values = values / rows["n_customers"]
    sizes = rows["n_customers"].astype(float)
    keep = values > 0.0
    dropped = int((~keep).sum())
    if dropped:
        logger.warning(
            "Dropped non-positive errors from power-law fit",
            extra={"method": method, "metric": metric, "dropped": dropped},
        )
    return list(zip(sizes[keep].tolist(), values[keep].tolist(), strict=True))


def powerlaw_payload(fit: PowerLawFit, **context: Any) -> dict[str, Any]:
    return {
        **context,
        "a": fit.a,
        "b": fit.b,
        "a_interval": list(fit.a_interval()),
        "b_interval": list(fit.b_interval()),
        "fit": fit.model_dump(mode="json"),
        "band": [s.model_dump(mode="json") for s in fit.band_samples()],
    }


def _skipped_frame(report: SweepReport) -> pd.DataFrame:
    rows = [
        {
            "feeder_id": s.cell.feeder_id,
            "method": s.cell.method.value,
            "season": "" if s.cell.season is None else s.cell.season.isoformat(),
            "weeks": "" if s.cell.weeks is None else str(s.cell.weeks),
            "weight": s.cell.weight,
            "error": s.error,
            "message": s.message,
        }
        for s in sorted(report.skipped, key=lambda s: s.cell.sort_key())
    ]
    return pd.DataFrame(rows, columns=[*RESULT_COLUMNS[:5], "error", "message"])


def _individual_frame(report: SweepReport) -> pd.DataFrame:
    rows = []
    for o in sorted(report.outcomes, key=lambda o: o.cell.sort_key()):
        if o.report.per_customer_rmae is None:
            continue
        for customer_id, value in zip(
            o.assignment.profiles, o.report.per_customer_rmae, strict=True
        ):
            rows.append(
                {
                    "feeder_id": o.cell.feeder_id,
                    "method": o.cell.method.value,
                    "season": "" if o.cell.season is None else o.cell.season.isoformat(),
                    "weeks": "" if o.cell.weeks is None else str(o.cell.weeks),
                    "weight": o.cell.weight,
                    "customer_id": customer_id,
                    "rmae": value,
                }
            )
    return pd.DataFrame(rows, columns=[*RESULT_COLUMNS[:5], "customer_id", "rmae"])


def _write_assignments(report: SweepReport, directory: Path) -> None:
    by_feeder: dict[str, list[dict[str, Any]]] = {}
    for o in sorted(report.outcomes, key=lambda o: o.cell.sort_key()):
        by_feeder.setdefault(o.cell.feeder_id, []).append(o.assignment.model_dump(mode="json"))
    for feeder_id, assignments in by_feeder.items():
        safe = feeder_id.replace("/", "_").replace("\\", "_")
        _write_json(directory / f"{safe}.json", assignments)


def write_sweep(
    report: SweepReport, out_dir: Path, *, methods: Sequence[str] | None = None
) -> None:
    """Write every sweep artefact under ``out_dir``."""

    out_dir.mkdir(parents=True, exist_ok=True)
    results = results_frame(report)
    results.to_csv(out_dir / "results.csv", index=False)
    _skipped_frame(report).to_csv(out_dir / "skipped.csv", index=False)
    error_surface(results).to_csv(out_dir / "error_surface.csv", index=False)
    error_vs_size(results).to_csv(out_dir / "error_vs_size.csv", index=False)
    rpde_distribution(results).to_csv(out_dir / "rpde_distribution.csv", index=False)
    _write_assignments(report, out_dir / "assignments")

    individual = _individual_frame(report)
    if not individual.empty:
        individual.to_csv(out_dir / "individual_errors.csv", index=False)

    fits: dict[str, Any] = {}
    for method in methods or sorted(results["method"].unique()):
        points = powerlaw_points(results, method=method)
        try:
            fit = fit_power_law(points)
        except FitError as e:
            logger.warning("Power-law fit skipped", extra={"method": method, "reason": str(e)})
            continue
        best = best_configuration(results, method)
        payload = powerlaw_payload(fit, method=method, metric="rmae", configuration=best)
        _write_json(out_dir / f"powerlaw_{method}.json", payload)
        fits[method] = {"a": fit.a, "b": fit.b}

    mean_by_method = (
        {str(k): float(v) for k, v in results.groupby("method")["rmae"].mean().items()}
        if not results.empty
        else {}
    )
    summary = {
        "master_seed": report.master_seed,
        "cells": len(report.outcomes) + len(report.skipped),
        "completed": len(report.outcomes),
        "skipped": len(report.skipped),
        "mean_rmae_by_method": mean_by_method,
        "best_configuration": {
            m: best_configuration(results, m) for m in sorted(results["method"].unique())
        },
        **season_summary(results),
        "powerlaw": fits,
    }
    _write_json(out_dir / "summary.json", summary)
    logger.info("Sweep results written", extra={"path": str(out_dir), "rows": len(results)})


def _plain(value: Any) -> Any:
    # numpy scalars from pandas aggregations are not JSON serialisable.
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value
