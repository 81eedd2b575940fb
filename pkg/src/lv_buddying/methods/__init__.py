"""Buddying methods: simple, genetic algorithm and Monte Carlo baseline."""

from lv_buddying.methods.candidates import CandidateIndex, ProfilePool
from lv_buddying.methods.genetic import (
    FitnessEvaluator,
    GaConfig,
    GaResult,
    Genome,
    evolve,
    evolve_with_trace,
    fitness,
    window_bounds,
)
from lv_buddying.methods.monte_carlo import (
    DEFAULT_SAMPLES,
    MonteCarloResult,
    monte_carlo_buddy,
    sample_rmae,
)
from lv_buddying.methods.simple import mean_demand_mismatch, simple_buddy

__all__ = [
    "DEFAULT_SAMPLES",
    "CandidateIndex",
    "FitnessEvaluator",
    "GaConfig",
    "GaResult",
    "Genome",
    "MonteCarloResult",
    "ProfilePool",
    "evolve",
    "evolve_with_trace",
    "fitness",
    "mean_demand_mismatch",
    "monte_carlo_buddy",
    "sample_rmae",
    "simple_buddy",
    "window_bounds",
]
