"""Random-sampling baseline: best of many uniform group-respecting assignments by RMAE."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from lv_buddying.domain.series import FloatArray
from lv_buddying.domain.types import (
    BuddyAssignment,
    BuddyMethod,
    Feeder,
    MonitoredProfile,
    TrainingWindow,
)
from lv_buddying.errors import InvalidInputError
from lv_buddying.methods.candidates import CandidateIndex, ProfilePool
from lv_buddying.methods.genetic import FitnessEvaluator

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000


@dataclass(frozen=True, slots=True)
class MonteCarloResult:
    assignment: BuddyAssignment
    rmae_samples: FloatArray

    @property
    def best_rmae(self) -> float:
        return float(self.rmae_samples.min())


def sample_rmae(
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    training_window: TrainingWindow,
    n_samples: int,
    seed: int,
) -> MonteCarloResult:
    if n_samples < 1:
        raise InvalidInputError(f"n_samples must be >= 1, got {n_samples}")

    index = CandidateIndex(feeder, ProfilePool.of(pool))
    # With w = 0 the fitness is Σ|a − s| / S, so RMAE is that divided by H.
    evaluator = FitnessEvaluator(index, training_window, 0.0)
    rng = np.random.default_rng(seed)
    genomes = index.random_genomes(n_samples, rng)
    samples = evaluator(genomes) / evaluator.window_slots
    samples.setflags(write=False)

    best = int(np.argmin(samples))
    logger.info(
        "Monte Carlo finished",
        extra={
            "feeder_id": feeder.feeder_id,
            "samples": n_samples,
            "seed": seed,
            "best_rmae": float(samples[best]),
        },
    )
    assignment = BuddyAssignment(
        feeder_id=feeder.feeder_id,
        profiles=index.to_profile_ids(genomes[best]),
        method=BuddyMethod.MONTE_CARLO,
        weight=0.0,
        training_window=training_window,
        seed=seed,
        fitness=float(samples[best]),
    )
    return MonteCarloResult(assignment=assignment, rmae_samples=samples)


def monte_carlo_buddy(
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    training_window: TrainingWindow,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> tuple[BuddyAssignment, list[float]]:
    """Lowest-RMAE assignment among ``n_samples`` draws, plus every sample's RMAE."""

    result = sample_rmae(feeder, pool, training_window, n_samples, seed)
    return result.assignment, result.rmae_samples.tolist()
