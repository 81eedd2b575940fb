"""Reading TOML and YAML documents (run files and group mappings)."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any

import yaml

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from lv_buddying.errors import ConfigurationError

TOML_SUFFIXES = frozenset({".toml"})
YAML_SUFFIXES = frozenset({".yaml", ".yml"})


def read_document(path: Path, what: str) -> dict[str, Any]:
    """Parse ``path`` as TOML or YAML, chosen by suffix, into a mapping.

    An empty YAML document reads as ``{}``.

    Raises:
        ConfigurationError: if the suffix is unsupported, the file is missing, it does not
            parse, or its top level is not a mapping.
    """

    suffix = path.suffix.lower()
    if suffix not in TOML_SUFFIXES | YAML_SUFFIXES:
        raise ConfigurationError(f"{what} must be .toml, .yaml or .yml: {path}")

    try:
        if suffix in TOML_SUFFIXES:
            with path.open("rb") as f:
                raw: Any = tomllib.load(f)
        else:
            with path.open(encoding="utf-8") as f:
                raw = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"{what} not found: {path}") from e
    except (tomllib.TOMLDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"invalid {what} {path}: {e}") from e

    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{what} must be a mapping at the top level: {path}")
    return raw
