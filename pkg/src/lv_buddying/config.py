"""Configuration for buddying runs.

Process-level settings come from environment variables and a local `.env` file. Everything that
defines an experiment (sweep grid, GA parameters, synthetic pool) lives in a TOML or YAML run
file so a run can be reproduced from the file and a master seed.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from lv_buddying.documents import read_document
from lv_buddying.experiments.sweep import SweepSpec
from lv_buddying.methods.genetic import GaConfig
from lv_buddying.pseudo.synthetic import SyntheticPoolSpec


class BuddySettings(BaseSettings):
    """Settings for the ``buddy`` command.

    Environment variables:
    - BUDDY_LOG_LEVEL    (optional)
    - BUDDY_WORKERS      (optional)
    - BUDDY_OUTPUT_DIR   (optional)
    - BUDDY_MASTER_SEED  (optional)

    Notes:
        Tests can point at a different env file with ``BuddySettings(_env_file=path)``.
    """

    log_level: str = Field(
        default="INFO",
        validation_alias="BUDDY_LOG_LEVEL",
        description="Root logging level",
    )
    workers: int = Field(
        default=1,
        ge=1,
        validation_alias="BUDDY_WORKERS",
        description="Worker processes for sweep cells",
    )
    output_dir: Path = Field(
        default=Path("results"),
        validation_alias="BUDDY_OUTPUT_DIR",
        description="Default directory for reports when --out is not given",
    )
    master_seed: int = Field(
        default=0,
        validation_alias="BUDDY_MASTER_SEED",
        description="Master seed used when the run file does not set one",
    )

    model_config = SettingsConfigDict(
        env_prefix="",
        env_file=".env",
        extra="ignore",
    )


class RunConfig(BaseModel):
    """Contents of a run file such as ``sweep.toml``.

    Top-level ``master_seed`` plus ``sweep``, ``ga`` and ``pool`` tables; every table is
    optional and falls back to the research defaults.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    master_seed: int | None = None
    sweep: SweepSpec = Field(default_factory=SweepSpec)
    ga: GaConfig = Field(default_factory=GaConfig)
    pool: SyntheticPoolSpec = Field(default_factory=SyntheticPoolSpec)

    @classmethod
    def load(cls, path: Path) -> RunConfig:
        """Parse and validate a TOML or YAML run file.

        Raises:
            ConfigurationError: if the file is missing, does not parse or is not a mapping.
            pydantic.ValidationError: if a value is out of range.
        """

        return cls.model_validate(read_document(path, "run file"))

    def seed(self, settings: BuddySettings) -> int:
        return settings.master_seed if self.master_seed is None else self.master_seed
