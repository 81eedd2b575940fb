"""Unit tests for customer grouping and mapping overrides."""

from __future__ import annotations

import logging
from pathlib import Path

import pytest

from lv_buddying.errors import ConfigurationError, GroupingError, SchemaError
from lv_buddying.grouping import (
    DEFAULT_RULES,
    UNKNOWN_BAND_GROUP,
    CustomerAttributes,
    GroupId,
    GroupMapping,
    assign_group,
    representative_attributes,
)


@pytest.mark.parametrize(
    ("profile_class", "band", "has_pv", "group"),
    [
        (1, "B", False, 0),
        (1, "D", False, 1),
        (1, "E", False, 2),
        (1, "H", False, 3),
        (2, "G", False, 4),
        (2, "A", True, 5),
        (1, "D", True, 6),
    ],
)
def test_default_table(profile_class: int, band: str, has_pv: bool, group: int) -> None:
    attrs = CustomerAttributes.parse(profile_class, band, has_pv)
    assert assign_group(attrs) == group


def test_unknown_band_falls_back_with_warning(caplog: pytest.LogCaptureFixture) -> None:
    attrs = CustomerAttributes.parse(1, "", "N")
    with caplog.at_level(logging.WARNING, logger="lv_buddying.grouping"):
        assert assign_group(attrs) == 1
    assert any("Unknown council tax band" in r.getMessage() for r in caplog.records)


def test_unknown_band_is_an_error_when_strict() -> None:
    with pytest.raises(GroupingError):
        assign_group(CustomerAttributes.parse(1, "?", "N"), strict=True)


def test_unknown_band_does_not_matter_for_economy_7() -> None:
    assert assign_group(CustomerAttributes.parse(2, "", "N")) == 4


def test_invalid_attributes_are_rejected() -> None:
    with pytest.raises(GroupingError):
        CustomerAttributes.parse(3, "A", "N")
    with pytest.raises(GroupingError):
        CustomerAttributes.parse(1, "Z", "N")
    with pytest.raises(GroupingError):
        CustomerAttributes.parse(1, "A", "maybe")


def test_representative_attributes_land_in_their_group() -> None:
    for rule in DEFAULT_RULES:
        assert assign_group(representative_attributes(rule.group)) == rule.group
    with pytest.raises(GroupingError):
        representative_attributes(GroupId(42))


def test_mapping_from_toml(tmp_path: Path) -> None:
    path = tmp_path / "mapping.toml"
    path.write_text(
        "\n".join(
            [
                "unknown_band_group = 0",
                "[[rule]]",
                "profile_class = 1",
                'band = "ABCD"',
                "has_pv = false",
                "group = 0",
                "[[rule]]",
                "profile_class = 1",
                'band = "*"',
                "has_pv = false",
                "group = 1",
                "",
            ]
        ),
        encoding="utf-8",
    )

    mapping = GroupMapping.load(path)

    assert mapping.groups == [0, 1]
    assert mapping.assign(CustomerAttributes.parse(1, "C", "N")) == 0
    assert mapping.assign(CustomerAttributes.parse(1, "H", "N")) == 1
    with pytest.raises(GroupingError):
        mapping.assign(CustomerAttributes.parse(2, "A", "N"))


def test_mapping_from_yaml(tmp_path: Path) -> None:
    path = tmp_path / "mapping.yml"
    path.write_text(
        "\n".join(
            [
                "rule:",
                "  - {profile_class: 1, band: [A, B], has_pv: N, group: 0}",
                "  - {profile_class: 1, band: '*', has_pv: N, group: 1}",
                "  - {profile_class: 1, band: any, has_pv: true, group: 2}",
                "",
            ]
        ),
        encoding="utf-8",
    )

    mapping = GroupMapping.load(path)

    assert mapping.unknown_band_group == UNKNOWN_BAND_GROUP
    assert mapping.assign(CustomerAttributes.parse(1, "B", "N")) == 0
    assert mapping.assign(CustomerAttributes.parse(1, "F", "N")) == 1
    assert mapping.assign(CustomerAttributes.parse(1, "F", "Y")) == 2


def test_mapping_from_csv(tmp_path: Path) -> None:
    path = tmp_path / "mapping.csv"
    path.write_text(
        "profile_class,council_tax_band,has_pv,group\n1,A;B,N,0\n1,any,N,1\n1,any,Y,2\n",
        encoding="utf-8",
    )

    mapping = GroupMapping.load(path)

    assert mapping.assign(CustomerAttributes.parse(1, "B", "N")) == 0
    assert mapping.assign(CustomerAttributes.parse(1, "F", "N")) == 1
    assert mapping.assign(CustomerAttributes.parse(1, "F", "Y")) == 2


def test_mapping_file_errors(tmp_path: Path) -> None:
    with pytest.raises(ConfigurationError):
        GroupMapping.load(tmp_path / "mapping.json")

    bad = tmp_path / "bad.csv"
    bad.write_text("profile_class,council_tax_band,has_pv,group\n7,A,N,0\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        GroupMapping.load(bad)

    empty = tmp_path / "empty.yaml"
    empty.write_text("rule: []\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        GroupMapping.load(empty)

    with pytest.raises(ConfigurationError):
        GroupMapping.load(tmp_path / "missing.yaml")
