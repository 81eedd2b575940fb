"""Genetic-algorithm buddying against substation readings and mean daily demands.

A genome is one pool position per customer (feeder customer order). The fitness is

    F = (1 − w) · Σ_t |a(t) − s(t)|^p / S  +  w · Σ_j |U_j − Û_{k_j}| / D

with ``a`` the aggregate of the assigned profiles over the training window, ``s`` the
substation series on the same window, ``S = Σ_t s(t)`` and ``D = Σ_j U_j``. ``p`` is 1 unless
``fitness_p`` says otherwise.

Random draws come from one generator per run, always in this order: initial population, then
per generation the optional reset, parent choice, crossover coins, mutation mask and mutation
replacements. Evaluation consumes no randomness.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from lv_buddying.domain.series import DAYS_PER_WEEK, FloatArray, slice_days
from lv_buddying.domain.types import (
    BuddyAssignment,
    BuddyMethod,
    Feeder,
    MonitoredProfile,
    TrainingWindow,
)
from lv_buddying.errors import ConfigurationError, DegenerateNormalizationError
from lv_buddying.methods.candidates import CandidateIndex, IntArray, ProfilePool

logger = logging.getLogger(__name__)

# Genomes evaluated per block; bounds the (block, slots) aggregate held in memory.
_EVAL_BLOCK = 256


class GaConfig(BaseModel):
    """Hyperparameters of one GA run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    weight: float = Field(default=0.0, ge=0.0, le=1.0, description="w in the fitness")
    population: int = Field(default=100, ge=3, description="G, genomes per generation")
    elite: int = Field(default=10, ge=2, description="G', genomes kept as parents")
    generations: int = Field(default=100, ge=1)
    mutation_rate: float = Field(default=0.1, ge=0.0, le=1.0, description="p0")
    mutation_decay: Literal["linear", "constant"] = "linear"
    reset_generation: int | None = Field(
        default=40, ge=1, description="Generation at which the population is re-randomised"
    )
    fitness_p: float = Field(default=1.0, ge=1.0)
    seed: int = 0

    @model_validator(mode="after")
    def _check_sizes(self) -> GaConfig:
        if self.elite >= self.population:
            raise ValueError(
                f"elite ({self.elite}) must be smaller than population ({self.population})"
            )
        if self.reset_generation is not None and self.reset_generation >= self.generations:
            raise ValueError(
                f"reset_generation ({self.reset_generation}) must be below "
                f"generations ({self.generations})"
            )
        return self

    def mutation_rate_at(self, generation: int) -> float:
        if self.mutation_decay == "constant":
            return self.mutation_rate
        return self.mutation_rate * (1.0 - generation / self.generations)


@dataclass(frozen=True, slots=True)
class Genome:
    """Pool positions, one per customer, with their cached fitness."""

    indices: IntArray
    fitness: float


@dataclass(frozen=True, slots=True)
class GaResult:
    assignment: BuddyAssignment
    best: Genome
    trace: tuple[float, ...]
    """Best-so-far fitness after initialisation and after every generation."""


def window_bounds(training_window: TrainingWindow) -> tuple[date, date]:
    """Inclusive first and last calendar day of a training window."""

    end = training_window.start + timedelta(days=training_window.weeks * DAYS_PER_WEEK - 1)
    return training_window.start, end


class FitnessEvaluator:
    """Vectorised fitness of many genomes for one feeder, window and weight.

    Terms with zero weight are skipped entirely, so their inputs need not exist and cannot
    influence the result.
    """

    def __init__(
        self,
        index: CandidateIndex,
        training_window: TrainingWindow,
        weight: float,
        *,
        fitness_p: float = 1.0,
    ) -> None:
        feeder = index.feeder
        self.index = index
        self.weight = weight
        self.fitness_p = fitness_p
        self._use_substation = weight < 1.0
        self._use_means = weight > 0.0

        self._profiles: FloatArray | None = None
        self._target: FloatArray | None = None
        self._s_total = 1.0
        if self._use_substation:
            if feeder.substation_series is None:
                raise ConfigurationError(
                    f"feeder {feeder.feeder_id} has no substation series; needed for w < 1"
                )
            start, end = window_bounds(training_window)
            self._target = slice_days(feeder.substation_series, start, end).values
            self._s_total = float(self._target.sum())
            if self._s_total <= 0.0:
                raise DegenerateNormalizationError(
                    f"feeder {feeder.feeder_id}: substation total S is zero on {start}..{end}"
                )
            self._profiles = index.pool.matrix(start, end)

        self._d_total = float(index.demands.sum())
        if self._use_means and self._d_total <= 0.0:
            raise DegenerateNormalizationError(
                f"feeder {feeder.feeder_id}: total mean daily demand D is zero"
            )

    @property
    def window_slots(self) -> int:
        return 0 if self._target is None else int(self._target.size)

    def substation_error(self, genomes: IntArray) -> FloatArray:
        """Σ_t |a(t) − s(t)|^p for each genome row."""

        assert self._profiles is not None and self._target is not None
        out = np.empty(genomes.shape[0], dtype=float)
        for lo in range(0, genomes.shape[0], _EVAL_BLOCK):
            block = genomes[lo : lo + _EVAL_BLOCK]
            agg = np.zeros((block.shape[0], self._target.size), dtype=float)
            for j in range(block.shape[1]):
                agg += self._profiles[block[:, j]]
            diff = np.abs(agg - self._target)
            if self.fitness_p != 1.0:
                diff **= self.fitness_p
            out[lo : lo + block.shape[0]] = diff.sum(axis=1)
        return out

    def __call__(self, genomes: IntArray) -> FloatArray:
        genomes = np.atleast_2d(genomes)
        total = np.zeros(genomes.shape[0], dtype=float)
        if self._use_substation:
            total += (1.0 - self.weight) * self.substation_error(genomes) / self._s_total
        if self._use_means:
            total += self.weight * self.index.mean_mismatch(genomes) / self._d_total
        return total


def fitness(
    genome: Genome | IntArray | Iterable[int],
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    training_window: TrainingWindow,
    w: float,
    *,
    fitness_p: float = 1.0,
) -> float:
    """Fitness of a single genome; see the module docstring for the formula."""

    index = CandidateIndex(feeder, ProfilePool.of(pool))
    indices = genome.indices if isinstance(genome, Genome) else np.asarray(list(genome))
    evaluator = FitnessEvaluator(index, training_window, w, fitness_p=fitness_p)
    return float(evaluator(indices.astype(np.int64))[0])


def _crossover(elite: IntArray, n: int, rng: np.random.Generator) -> IntArray:
    parents = rng.integers(0, elite.shape[0], size=(n, 2))
    first = elite[parents[:, 0]]
    second = elite[parents[:, 1]]
    coins = rng.random(first.shape) < 0.5
    # Positions where both parents agree are inherited unchanged.
    return np.where(first == second, first, np.where(coins, first, second))


def _mutate(
    children: IntArray, rate: float, index: CandidateIndex, rng: np.random.Generator
) -> IntArray:
    mask = rng.random(children.shape) < rate
    replacements = index.random_genomes(children.shape[0], rng)
    return np.where(mask, replacements, children)


def evolve_with_trace(
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    training_window: TrainingWindow,
    config: GaConfig,
) -> GaResult:
    """Run the GA and return the best-ever assignment with its best-so-far trace."""

    index = CandidateIndex(feeder, ProfilePool.of(pool))
    evaluate = FitnessEvaluator(index, training_window, config.weight, fitness_p=config.fitness_p)
    rng = np.random.default_rng(config.seed)
    size = config.population

    population = index.random_genomes(size, rng)
    scores = evaluate(population)
    best_at = int(np.argmin(scores))
    best = population[best_at].copy()
    best_fitness = float(scores[best_at])
    trace = [best_fitness]

    for generation in range(config.generations):
        if generation == config.reset_generation:
            population = index.random_genomes(size, rng)
            population[0] = best
            scores = evaluate(population)

        order = np.argsort(scores, kind="stable")[: config.elite]
        elite = population[order]
        rate = config.mutation_rate_at(generation)

        population = _mutate(_crossover(elite, size, rng), rate, index, rng)
        population[0] = best
        scores = evaluate(population)

        gen_best = int(np.argmin(scores))
        if scores[gen_best] < best_fitness:
            best = population[gen_best].copy()
            best_fitness = float(scores[gen_best])
        trace.append(best_fitness)

        logger.debug(
            "GA generation",
            extra={
                "feeder_id": feeder.feeder_id,
                "generation": generation + 1,
                "best_fitness": best_fitness,
                "mutation_rate": rate,
            },
        )

    logger.info(
        "GA finished",
        extra={
            "feeder_id": feeder.feeder_id,
            "weight": config.weight,
            "seed": config.seed,
            "generations": config.generations,
            "best_fitness": best_fitness,
        },
    )

    assignment = BuddyAssignment(
        feeder_id=feeder.feeder_id,
        profiles=index.to_profile_ids(best),
        method=BuddyMethod.GA,
        weight=config.weight,
        training_window=training_window,
        seed=config.seed,
        fitness=best_fitness,
    )
    return GaResult(
        assignment=assignment,
        best=Genome(indices=best, fitness=best_fitness),
        trace=tuple(trace),
    )


def evolve(
    feeder: Feeder,
    pool: ProfilePool | Iterable[MonitoredProfile],
    training_window: TrainingWindow,
    config: GaConfig,
) -> BuddyAssignment:
    """Best-ever assignment found by the GA; non-convergence still returns the best so far."""

    return evolve_with_trace(feeder, pool, training_window, config).assignment
