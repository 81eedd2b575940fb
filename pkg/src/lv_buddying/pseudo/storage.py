"""On-disk layout of a pseudo-feeder suite.

A suite directory holds the ordinary ingestion files, so it loads through the same code as
real data, plus the ground truth::

    suite.json                  kind, feeder count and seed
    profiles.csv                buddy pool readings
    profile_attributes.csv      buddy pool attributes
    generating_profiles.csv     readings of every generating profile
    generating_attributes.csv
    customers.csv               registry of the pseudo-feeders
    substations.csv             feeder and phase aggregates
    truth.csv                   feeder_id,customer_id,profile_id
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
from pydantic import BaseModel, ConfigDict

from lv_buddying.domain.types import MonitoredProfile
from lv_buddying.errors import SchemaError
from lv_buddying.ingestion.loaders import load_feeders, load_profile_attributes, load_profiles
from lv_buddying.ingestion.writers import (
    write_customers_csv,
    write_profile_attributes_csv,
    write_profiles_csv,
    write_substations_csv,
)
from lv_buddying.pseudo.feeders import PseudoFeeder, PseudoType

logger = logging.getLogger(__name__)

TRUTH_COLUMNS = ("feeder_id", "customer_id", "profile_id")


class SuiteManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: PseudoType
    feeders: int
    seed: int


@dataclass(frozen=True, slots=True)
class PseudoSuite:
    manifest: SuiteManifest
    feeders: list[PseudoFeeder]
    pool: list[MonitoredProfile]


def write_suite(
    directory: Path,
    feeders: Sequence[PseudoFeeder],
    pool: Sequence[MonitoredProfile],
    manifest: SuiteManifest,
) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    generating = {p.profile_id: p for f in feeders for p in f.generating.values()}
    ordered = [generating[pid] for pid in sorted(generating)]

    write_profiles_csv(pool, directory / "profiles.csv")
    write_profile_attributes_csv(pool, directory / "profile_attributes.csv")
    write_profiles_csv(ordered, directory / "generating_profiles.csv")
    write_profile_attributes_csv(ordered, directory / "generating_attributes.csv")
    write_customers_csv([f.feeder for f in feeders], directory / "customers.csv")
    write_substations_csv([f.feeder for f in feeders], directory / "substations.csv")

    truth = [
        {
            "feeder_id": f.feeder_id,
            "customer_id": c.customer_id,
            "profile_id": f.truth[c.customer_id],
        }
        for f in feeders
        for c in f.feeder.customers
    ]
    pd.DataFrame(truth, columns=list(TRUTH_COLUMNS)).to_csv(directory / "truth.csv", index=False)
    (directory / "suite.json").write_text(
        json.dumps(manifest.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    logger.info(
        "Pseudo-feeder suite written",
        extra={"path": str(directory), "feeders": len(feeders), "type": manifest.kind},
    )


def load_suite(directory: Path) -> PseudoSuite:
    manifest_path = directory / "suite.json"
    if not manifest_path.exists():
        raise SchemaError(manifest_path, None, "suite manifest not found")
    manifest = SuiteManifest.model_validate_json(manifest_path.read_text(encoding="utf-8"))

    pool = load_profiles(
        directory / "profiles.csv", load_profile_attributes(directory / "profile_attributes.csv")
    )
    generating = {
        p.profile_id: p
        for p in load_profiles(
            directory / "generating_profiles.csv",
            load_profile_attributes(directory / "generating_attributes.csv"),
        )
    }
    feeders = load_feeders(directory / "customers.csv", [], directory / "substations.csv")

    truth_path = directory / "truth.csv"
    truth = pd.read_csv(truth_path, dtype=str, keep_default_na=False)
    missing = [c for c in TRUTH_COLUMNS if c not in truth.columns]
    if missing:
        raise SchemaError(truth_path, None, f"missing columns {missing}")
    by_feeder: dict[str, dict[str, MonitoredProfile]] = {}
    for idx, row in enumerate(truth.itertuples(index=False), start=1):
        profile = generating.get(row.profile_id)
        if profile is None:
            raise SchemaError(truth_path, idx, f"unknown generating profile {row.profile_id!r}")
        by_feeder.setdefault(row.feeder_id, {})[row.customer_id] = profile

    suite = [PseudoFeeder(feeder=f, generating=by_feeder.get(f.feeder_id, {})) for f in feeders]
    return PseudoSuite(manifest=manifest, feeders=suite, pool=pool)
