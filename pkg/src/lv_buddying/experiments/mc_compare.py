"""GA against the best of many random assignments, per feeder."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from datetime import date

import numpy as np
import pandas as pd

from lv_buddying.domain.types import BuddyAssignment, Feeder, MonitoredProfile, TrainingWindow
from lv_buddying.experiments.runner import check_coverage
from lv_buddying.experiments.seeds import derive_seed
from lv_buddying.experiments.sweep import SKIPPABLE_ERRORS
from lv_buddying.methods.candidates import ProfilePool
from lv_buddying.methods.genetic import GaConfig, evolve, window_bounds
from lv_buddying.methods.monte_carlo import DEFAULT_SAMPLES, sample_rmae
from lv_buddying.metrics.reports import evaluate_assignment

logger = logging.getLogger(__name__)

# Share of random samples beating the GA, reported for feeders where the GA loses.
PERCENTILE_BANDS = (0.025, 0.05, 0.30)

COMPARISON_COLUMNS = [
    "feeder_id",
    "n_customers",
    "rmae_ga",
    "rmae_mc",
    "difference",
    "rmae_ga_train",
    "rmae_mc_train",
    "difference_train",
    "ga_percentile",
    "band",
    "ga_seed",
    "mc_seed",
]


def percentile_band(percentile: float) -> str:
    for bound in PERCENTILE_BANDS:
        if percentile <= bound:
            return f"best {bound:.1%}"
    return f"worse than {PERCENTILE_BANDS[-1]:.0%}"


@dataclass(frozen=True, slots=True)
class McComparison:
    rows: pd.DataFrame

    @property
    def wins(self) -> int:
        """Feeders where the GA beats the best random sample on the test window."""

        return int((self.rows["difference"] > 0).sum()) if not self.rows.empty else 0

    def band_counts(self) -> dict[str, int]:
        losing = self.rows[self.rows["difference"] <= 0]
        return {str(k): int(v) for k, v in losing["band"].value_counts().sort_index().items()}

    def summary(self) -> dict[str, object]:
        return {
            "feeders": len(self.rows),
            "ga_wins": self.wins,
            "mean_rmae_ga": float(self.rows["rmae_ga"].mean()) if len(self.rows) else None,
            "mean_rmae_mc": float(self.rows["rmae_mc"].mean()) if len(self.rows) else None,
            "losing_bands": self.band_counts(),
        }


def _rmae(
    feeder: Feeder, pool: ProfilePool, assignment: BuddyAssignment, start: date, end: date
) -> float:
    return evaluate_assignment(feeder, pool, assignment, start, end).rmae


def run_mc_comparison(
    feeders: Sequence[Feeder],
    pool: Sequence[MonitoredProfile],
    training_window: TrainingWindow,
    test_start: date,
    test_end: date,
    *,
    ga: GaConfig | None = None,
    n_samples: int = DEFAULT_SAMPLES,
    master_seed: int = 0,
) -> McComparison:
    """Per feeder: RMAE_MC − RMAE_GA on the test window and the GA's standing in the sample.

    ``ga_percentile`` is the share of random samples whose training-window RMAE is strictly
    lower than the GA's, so 0 means no sample beats it.
    """

    ga = ga or GaConfig()
    profile_pool = ProfilePool(pool)
    train_start, train_end = window_bounds(training_window)
    rows = []
    for feeder in feeders:
        ga_seed = derive_seed(master_seed, feeder.feeder_id, "mc-compare", "ga")
        mc_seed = derive_seed(master_seed, feeder.feeder_id, "mc-compare", "monte-carlo")
        try:
            check_coverage(feeder, profile_pool, test_start, test_end, training_window)
            ga_assignment = evolve(
                feeder, profile_pool, training_window, ga.model_copy(update={"seed": ga_seed})
            )
            mc = sample_rmae(feeder, profile_pool, training_window, n_samples, mc_seed)
        except SKIPPABLE_ERRORS as e:
            logger.warning(
                "Monte Carlo comparison skipped feeder",
                extra={"feeder_id": feeder.feeder_id, "reason": str(e)},
            )
            continue

        ga_train = _rmae(feeder, profile_pool, ga_assignment, train_start, train_end)
        ga_test = _rmae(feeder, profile_pool, ga_assignment, test_start, test_end)
        mc_test = _rmae(feeder, profile_pool, mc.assignment, test_start, test_end)
        # Ties within rounding do not count as beating the GA.
        beats = (mc.rmae_samples < ga_train) & ~np.isclose(mc.rmae_samples, ga_train)
        percentile = float(np.mean(beats))
        rows.append(
            {
                "feeder_id": feeder.feeder_id,
                "n_customers": feeder.n_customers,
                "rmae_ga": ga_test,
                "rmae_mc": mc_test,
                "difference": mc_test - ga_test,
                "rmae_ga_train": ga_train,
                "rmae_mc_train": mc.best_rmae,
                "difference_train": mc.best_rmae - ga_train,
                "ga_percentile": percentile,
                "band": percentile_band(percentile),
                "ga_seed": ga_seed,
                "mc_seed": mc_seed,
            }
        )

    comparison = McComparison(rows=pd.DataFrame(rows, columns=COMPARISON_COLUMNS))
    logger.info("Monte Carlo comparison finished", extra=comparison.summary())
    return comparison
