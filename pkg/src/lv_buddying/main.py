"""CLI entrypoint for buddying experiments."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from datetime import date
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from lv_buddying import __version__
from lv_buddying.config import BuddySettings, RunConfig
from lv_buddying.domain.types import BuddyMethod, Feeder, MonitoredProfile, TrainingWindow
from lv_buddying.errors import BuddyingError, ConfigurationError, FitError
from lv_buddying.experiments.mc_compare import run_mc_comparison
from lv_buddying.experiments.phase import DEFAULT_SIZE_RANGE, run_phase_comparison
from lv_buddying.experiments.reports import (
    best_configuration,
    powerlaw_payload,
    powerlaw_points,
    read_results,
    write_sweep,
)
from lv_buddying.experiments.runner import MethodSettings
from lv_buddying.experiments.sweep import run_sweep
from lv_buddying.experiments.validation import validate_suite, write_validation
from lv_buddying.grouping import GroupMapping
from lv_buddying.ingestion.loaders import (
    load_feeders,
    load_profile_attributes,
    load_profiles,
    registry_profile_attributes,
)
from lv_buddying.logging import configure_logging
from lv_buddying.metrics.powerlaw import DEFAULT_CONFIDENCE, fit_power_law
from lv_buddying.pseudo.feeders import build_suite
from lv_buddying.pseudo.storage import SuiteManifest, load_suite, write_suite
from lv_buddying.pseudo.synthetic import generate_pool

logger = logging.getLogger(__name__)

# Training window for comparisons run outside a sweep: eight weeks from late September.
DEFAULT_SEASON = date(2014, 9, 29)
DEFAULT_WEEKS = 8

_GA_OVERRIDES = (
    "weight",
    "population",
    "elite",
    "generations",
    "mutation_rate",
    "reset_generation",
    "fitness_p",
)


def _parse_weights(value: str) -> list[float]:
    try:
        return [float(p) for p in value.split(",") if p.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid weight list {value!r}") from e


def _parse_date(value: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid date {value!r} (expected YYYY-MM-DD)") from e


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML or YAML run file (defaults when omitted)")
    parser.add_argument("--master-seed", type=int, help="Overrides the run file and env seed")


def _add_data(parser: argparse.ArgumentParser) -> None:
    data = parser.add_argument_group("data", "Real data files, or a pseudo-feeder suite via --data")
    data.add_argument("--profiles", type=Path, help="Monitored profile readings CSV")
    data.add_argument(
        "--profile-attributes", type=Path, help="Monitored profile attributes CSV"
    )
    data.add_argument("--customers", type=Path, help="Customer registry CSV")
    data.add_argument("--substations", type=Path, help="Substation readings CSV")
    data.add_argument("--group-mapping", type=Path, help="TOML, YAML or CSV group mapping override")
    data.add_argument("--data", type=Path, help="Pseudo-feeder suite directory")


def _add_ga(parser: argparse.ArgumentParser) -> None:
    ga = parser.add_argument_group("genetic algorithm", "Overrides for the run file's [ga]")
    ga.add_argument("--weight", type=float, help="Fitness weight w in [0, 1]")
    ga.add_argument("--population", type=int, help="Population size G")
    ga.add_argument("--elite", type=int, help="Parents kept per generation G'")
    ga.add_argument("--generations", type=int, help="Number of generations")
    ga.add_argument("--mutation-rate", type=float, help="Initial mutation rate p0")
    ga.add_argument("--reset-generation", type=int, help="Generation of the population reset")
    ga.add_argument("--fitness-p", type=float, help="Exponent of the aggregate term")


def _add_window(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--season", type=_parse_date, default=DEFAULT_SEASON, help="Training window start"
    )
    parser.add_argument("--weeks", type=int, default=DEFAULT_WEEKS, help="Training window weeks")


def _add_workers(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, help="Worker processes (default BUDDY_WORKERS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="buddy",
        description="Buddy unmonitored LV customers to monitored smart meter profiles",
    )
    parser.add_argument("--version", action="version", version=f"lv-buddying {__version__}")

    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Season x weeks x weight sweep over real feeders")
    _add_config(run)
    _add_data(run)
    _add_ga(run)
    _add_workers(run)
    run.add_argument(
        "--method",
        dest="methods",
        action="append",
        choices=[m.value for m in BuddyMethod],
        help="Method to sweep (repeatable; default from the run file)",
    )
    run.add_argument("--samples", type=int, help="Monte Carlo samples per cell")
    run.add_argument("--out", type=Path, help="Output directory")

    pseudo = subparsers.add_parser("pseudo", help="Pseudo-feeder suites")
    pseudo_sub = pseudo.add_subparsers(dest="pseudo_command", required=True)

    gen = pseudo_sub.add_parser("gen", help="Generate a pseudo-feeder suite")
    _add_config(gen)
    gen.add_argument("--type", dest="kind", type=int, choices=[1, 2], default=1)
    gen.add_argument("--feeders", type=int, default=50, help="Number of pseudo-feeders")
    gen.add_argument("--min-size", type=int, default=10)
    gen.add_argument("--max-size", type=int, default=40)
    gen.add_argument(
        "--profiles", type=Path, help="Populate from real profiles instead of a synthetic pool"
    )
    gen.add_argument("--profile-attributes", type=Path)
    gen.add_argument("--out", type=Path, required=True, help="Suite directory")

    validate = pseudo_sub.add_parser("validate", help="Sweep a suite and score against truth")
    _add_config(validate)
    _add_ga(validate)
    _add_workers(validate)
    validate.add_argument("--data", type=Path, required=True, help="Suite directory")
    validate.add_argument("--out", type=Path, help="Output directory")

    mc = subparsers.add_parser("mc-compare", help="GA against the best random assignment")
    _add_config(mc)
    _add_data(mc)
    _add_ga(mc)
    _add_window(mc)
    mc.add_argument("--samples", type=int, help="Monte Carlo samples per feeder")
    mc.add_argument("--out", type=Path, help="Output directory")

    phase = subparsers.add_parser("phase-compare", help="Feeder-level against phase-level")
    _add_config(phase)
    _add_data(phase)
    _add_ga(phase)
    _add_window(phase)
    phase.add_argument(
        "--method", choices=[m.value for m in BuddyMethod], default=BuddyMethod.GA.value
    )
    phase.add_argument("--weights", type=_parse_weights, help="Comma-separated weights")
    phase.add_argument(
        "--size-range",
        type=int,
        nargs=2,
        metavar=("LO", "HI"),
        default=list(DEFAULT_SIZE_RANGE),
        help="Customer counts for the size-matched comparison",
    )
    phase.add_argument("--out", type=Path, help="Output directory")

    fit = subparsers.add_parser("fit-powerlaw", help="Fit error = a * size^(-b) to results.csv")
    fit.add_argument("--results", type=Path, required=True)
    fit.add_argument("--method", choices=[m.value for m in BuddyMethod], default="ga")
    fit.add_argument("--weight", type=float)
    fit.add_argument("--season", help="Training season (YYYY-MM-DD)")
    fit.add_argument("--weeks", type=int)
    fit.add_argument("--metric", choices=["rmae", "rpde"], default="rmae")
    fit.add_argument("--per-customer", action="store_true", help="Divide errors by size")
    fit.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE)
    fit.add_argument("--out", type=Path, help="JSON output (stdout when omitted)")

    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    """Run file with any CLI overrides applied."""

    config = RunConfig.load(args.config) if args.config else RunConfig()

    ga_updates = {
        name: getattr(args, name)
        for name in _GA_OVERRIDES
        if getattr(args, name, None) is not None
    }
    sweep_updates: dict[str, Any] = {}
    if getattr(args, "weight", None) is not None:
        sweep_updates["weights"] = [args.weight]
    if getattr(args, "methods", None):
        sweep_updates["methods"] = args.methods
    if getattr(args, "samples", None) is not None:
        sweep_updates["mc_samples"] = args.samples

    # Re-validate so overrides go through the same range checks as the file.
    payload = config.model_dump()
    payload["ga"] = {**payload["ga"], **ga_updates}
    payload["sweep"] = {**payload["sweep"], **sweep_updates}
    return RunConfig.model_validate(payload)


def _master_seed(args: argparse.Namespace, config: RunConfig, settings: BuddySettings) -> int:
    if getattr(args, "master_seed", None) is not None:
        return int(args.master_seed)
    return config.seed(settings)


def _load_real(args: argparse.Namespace) -> tuple[list[Feeder], list[MonitoredProfile]]:
    missing = [
        flag
        for flag, value in (
            ("--profiles", args.profiles),
            ("--customers", args.customers),
            ("--substations", args.substations),
        )
        if value is None
    ]
    if missing:
        raise ConfigurationError(f"missing data flags {missing} (or pass --data)")
    mapping = GroupMapping.load(args.group_mapping) if args.group_mapping else None
    # Monitored customers in the registry describe their own profiles; the attributes file wins.
    attributes = registry_profile_attributes(args.customers)
    if args.profile_attributes is not None:
        attributes.update(load_profile_attributes(args.profile_attributes))
    if not attributes:
        raise ConfigurationError(
            "no profile attributes: pass --profile-attributes or fill monitored_profile_id "
            "in the customer registry"
        )
    pool = load_profiles(args.profiles, attributes, mapping=mapping)
    feeders = load_feeders(args.customers, pool, args.substations, mapping=mapping)
    return feeders, pool


def _load_inputs(args: argparse.Namespace) -> tuple[list[Feeder], list[MonitoredProfile]]:
    if getattr(args, "data", None) is not None:
        suite = load_suite(args.data)
        return [p.feeder for p in suite.feeders], suite.pool
    return _load_real(args)


def _write_json(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _cmd_run(args: argparse.Namespace, settings: BuddySettings) -> int:
    config = _load_config(args)
    feeders, pool = _load_inputs(args)
    out = args.out or settings.output_dir
    report = run_sweep(
        config.sweep,
        feeders,
        pool,
        settings=MethodSettings(ga=config.ga, mc_samples=config.sweep.mc_samples),
        master_seed=_master_seed(args, config, settings),
        workers=args.workers or settings.workers,
    )
    write_sweep(report, out)
    print(
        f"Wrote {len(report.outcomes)} result rows ({len(report.skipped)} skipped) to {out}"
    )
    return 0


def _cmd_pseudo_gen(args: argparse.Namespace, settings: BuddySettings) -> int:
    config = _load_config(args)
    seed = _master_seed(args, config, settings)
    if args.profiles is not None:
        if args.profile_attributes is None:
            raise ConfigurationError("--profiles needs --profile-attributes")
        pool = load_profiles(args.profiles, load_profile_attributes(args.profile_attributes))
    else:
        pool = generate_pool(config.pool)
    feeders, buddy_pool = build_suite(
        pool,
        kind=args.kind,
        n_feeders=args.feeders,
        min_size=args.min_size,
        max_size=args.max_size,
        seed=seed,
    )
    manifest = SuiteManifest(kind=args.kind, feeders=len(feeders), seed=seed)
    write_suite(args.out, feeders, buddy_pool, manifest)
    print(f"Wrote {len(feeders)} type-{args.kind} pseudo-feeders to {args.out}")
    return 0


def _cmd_pseudo_validate(args: argparse.Namespace, settings: BuddySettings) -> int:
    config = _load_config(args)
    suite = load_suite(args.data)
    out = args.out or settings.output_dir
    validation = validate_suite(
        suite,
        config.sweep,
        settings=MethodSettings(ga=config.ga, mc_samples=config.sweep.mc_samples),
        master_seed=_master_seed(args, config, settings),
        workers=args.workers or settings.workers,
    )
    write_validation(validation, out)
    print(f"Validated {len(suite.feeders)} pseudo-feeders; results in {out}")
    return 0


def _cmd_mc_compare(args: argparse.Namespace, settings: BuddySettings) -> int:
    config = _load_config(args)
    feeders, pool = _load_inputs(args)
    out = args.out or settings.output_dir
    comparison = run_mc_comparison(
        feeders,
        pool,
        TrainingWindow(start=args.season, weeks=args.weeks),
        config.sweep.test_start,
        config.sweep.test_end,
        ga=config.ga,
        n_samples=config.sweep.mc_samples,
        master_seed=_master_seed(args, config, settings),
    )
    out.mkdir(parents=True, exist_ok=True)
    comparison.rows.to_csv(out / "mc_comparison.csv", index=False)
    summary = comparison.summary()
    _write_json(out / "mc_summary.json", summary)
    print(f"GA beat the best random assignment on {summary['ga_wins']}/{summary['feeders']}")
    return 0


def _cmd_phase_compare(args: argparse.Namespace, settings: BuddySettings) -> int:
    config = _load_config(args)
    feeders, pool = _load_inputs(args)
    out = args.out or settings.output_dir
    method = BuddyMethod(args.method)
    window = (
        None
        if method is BuddyMethod.SIMPLE
        else TrainingWindow(start=args.season, weeks=args.weeks)
    )
    if method is BuddyMethod.GA:
        weights = args.weights or config.sweep.weights
    else:
        weights = [1.0 if method is BuddyMethod.SIMPLE else 0.0]
    lo, hi = args.size_range
    comparison = run_phase_comparison(
        feeders,
        pool,
        window,
        config.sweep.test_start,
        config.sweep.test_end,
        method=method,
        weights=weights,
        master_seed=_master_seed(args, config, settings),
        settings=MethodSettings(ga=config.ga, mc_samples=config.sweep.mc_samples),
        size_range=(lo, hi),
    )
    out.mkdir(parents=True, exist_ok=True)
    comparison.rows.to_csv(out / "phase_comparison.csv", index=False)
    comparison.size_matched.to_csv(out / "size_matched.csv", index=False)
    print(f"Compared {len(comparison.rows)} feeder/weight pairs; results in {out}")
    return 0


def _cmd_fit_powerlaw(args: argparse.Namespace) -> int:
    results = read_results(args.results)
    points = powerlaw_points(
        results,
        method=args.method,
        weight=args.weight,
        season=args.season,
        weeks=args.weeks,
        metric=args.metric,
        per_customer=args.per_customer,
    )
    if not points:
        raise FitError(f"no {args.method} results match the requested configuration")
    fit = fit_power_law(points, confidence=args.confidence)
    payload = powerlaw_payload(
        fit,
        method=args.method,
        metric=args.metric,
        per_customer=args.per_customer,
        configuration=best_configuration(
            results[results["method"] == args.method], args.method
        ),
    )
    if args.out:
        _write_json(args.out, payload)
        print(f"a = {fit.a:.6g}, b = {fit.b:.6g}; written to {args.out}")
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    return 0


def _error(exc: BaseException) -> None:
    print(
        json.dumps({"error": type(exc).__name__, "message": str(exc)}, ensure_ascii=False),
        file=sys.stderr,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = BuddySettings()
    except ValidationError as e:
        # Logging isn't configured yet.
        _error(e)
        return 2

    configure_logging(settings.log_level)

    try:
        if args.command == "run":
            return _cmd_run(args, settings)
        if args.command == "pseudo":
            if args.pseudo_command == "gen":
                return _cmd_pseudo_gen(args, settings)
            return _cmd_pseudo_validate(args, settings)
        if args.command == "mc-compare":
            return _cmd_mc_compare(args, settings)
        if args.command == "phase-compare":
            return _cmd_phase_compare(args, settings)
        if args.command == "fit-powerlaw":
            return _cmd_fit_powerlaw(args)

        logger.error("Unknown command", extra={"command": args.command})
        return 2

    except (ValidationError, ConfigurationError) as e:
        logger.error("Invalid configuration", extra={"error": type(e).__name__})
        _error(e)
        return 2

    except BuddyingError as e:
        logger.error("Command failed", extra={"error": type(e).__name__, "reason": str(e)})
        _error(e)
        return 3

    except Exception as e:
        logger.exception("Command failed")
        _error(e)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
