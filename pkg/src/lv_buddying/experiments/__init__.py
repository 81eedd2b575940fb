"""Sweeps, phase mode, Monte Carlo comparison and pseudo-feeder validation."""

from lv_buddying.experiments.mc_compare import (
    PERCENTILE_BANDS,
    McComparison,
    percentile_band,
    run_mc_comparison,
)
from lv_buddying.experiments.phase import (
    DEFAULT_SIZE_RANGE,
    PhaseComparison,
    PhaseModeResult,
    allocate_phases,
    run_phase_comparison,
    run_phase_mode,
    size_matched_comparison,
)
from lv_buddying.experiments.reports import (
    RESULT_COLUMNS,
    best_configuration,
    error_surface,
    error_vs_size,
    powerlaw_payload,
    powerlaw_points,
    read_results,
    results_frame,
    rpde_distribution,
    season_summary,
    write_sweep,
)
from lv_buddying.experiments.runner import (
    MethodSettings,
    check_coverage,
    run_method,
    train_and_score,
)
from lv_buddying.experiments.seeds import derive_seed
from lv_buddying.experiments.sweep import (
    DEFAULT_SEASONS,
    Cell,
    CellOutcome,
    SkippedCell,
    SweepReport,
    SweepSpec,
    run_sweep,
)
from lv_buddying.experiments.validation import (
    ValidationReport,
    intermediate_weight_wins,
    validate_suite,
    write_validation,
)

__all__ = [
    "DEFAULT_SEASONS",
    "DEFAULT_SIZE_RANGE",
    "PERCENTILE_BANDS",
    "RESULT_COLUMNS",
    "Cell",
    "CellOutcome",
    "McComparison",
    "MethodSettings",
    "PhaseComparison",
    "PhaseModeResult",
    "SkippedCell",
    "SweepReport",
    "SweepSpec",
    "ValidationReport",
    "allocate_phases",
    "best_configuration",
    "check_coverage",
    "derive_seed",
    "error_surface",
    "error_vs_size",
    "intermediate_weight_wins",
    "percentile_band",
    "powerlaw_payload",
    "powerlaw_points",
    "read_results",
    "results_frame",
    "rpde_distribution",
    "run_mc_comparison",
    "run_method",
    "run_phase_comparison",
    "run_phase_mode",
    "run_sweep",
    "season_summary",
    "size_matched_comparison",
    "train_and_score",
    "validate_suite",
    "write_sweep",
    "write_validation",
]
