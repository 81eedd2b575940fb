"""Customer groups restricting which monitored profiles a customer may be buddied to.

The default mapping splits domestic customers by Elexon profile class, council tax band and
the presence of photovoltaics:

=====  =============  ================  ==
Group  Profile class  Council tax band  PV
=====  =============  ================  ==
0      1              A, B, C           N
1      1              D                 N
2      1              E                 N
3      1              F, G, H           N
4      2              any               N
5      2              any               Y
6      1              any               Y
=====  =============  ================  ==

Other regions can supply their own rules through :meth:`GroupMapping.load`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, NewType

import pandas as pd

from lv_buddying.documents import read_document
from lv_buddying.errors import GroupingError, SchemaError

logger = logging.getLogger(__name__)

GroupId = NewType("GroupId", int)
ProfileClass = Literal[1, 2]

TAX_BANDS: tuple[str, ...] = ("A", "B", "C", "D", "E", "F", "G", "H")
_UNKNOWN_BAND_TOKENS = {"", "?", "U", "UNKNOWN", "NA", "N/A", "NONE"}
_ANY_BAND_TOKENS = {"*", "ANY"}

# Band D is the modal mid band; used when a class-1, non-PV customer has no known band.
UNKNOWN_BAND_GROUP = GroupId(1)


def parse_band(value: str | None) -> str | None:
    """Normalise a council tax band; ``None`` means unknown."""

    if value is None:
        return None
    token = value.strip().upper()
    if token in _UNKNOWN_BAND_TOKENS:
        return None
    if token not in TAX_BANDS:
        raise GroupingError(f"unrecognised council tax band {value!r}")
    return token


def parse_flag(value: str | bool) -> bool:
    if isinstance(value, bool):
        return value
    token = value.strip().lower()
    if token in {"y", "yes", "true", "1"}:
        return True
    if token in {"n", "no", "false", "0", ""}:
        return False
    raise GroupingError(f"unrecognised yes/no value {value!r}")


@dataclass(frozen=True, slots=True)
class CustomerAttributes:
    """What a DNO typically knows about a domestic customer."""

    profile_class: ProfileClass
    council_tax_band: str | None
    has_pv: bool

    def __post_init__(self) -> None:
        if self.profile_class not in (1, 2):
            raise GroupingError(
                f"profile class must be 1 or 2 (domestic), got {self.profile_class!r}"
            )
        object.__setattr__(self, "council_tax_band", parse_band(self.council_tax_band))

    @classmethod
    def parse(
        cls, profile_class: str | int, council_tax_band: str | None, has_pv: str | bool
    ) -> CustomerAttributes:
        try:
            klass = int(profile_class)
        except ValueError as e:
            raise GroupingError(f"profile class must be an integer, got {profile_class!r}") from e
        if klass not in (1, 2):
            raise GroupingError(f"profile class must be 1 or 2 (domestic), got {klass}")
        return cls(
            profile_class=1 if klass == 1 else 2,
            council_tax_band=council_tax_band,
            has_pv=parse_flag(has_pv),
        )


@dataclass(frozen=True, slots=True)
class GroupRule:
    """Match on (class, band, PV). ``bands=None`` matches any band, known or not."""

    profile_class: ProfileClass
    bands: frozenset[str] | None
    has_pv: bool
    group: GroupId

    def matches(self, attrs: CustomerAttributes) -> bool:
        if attrs.profile_class != self.profile_class or attrs.has_pv != self.has_pv:
            return False
        if self.bands is None:
            return True
        return attrs.council_tax_band is not None and attrs.council_tax_band in self.bands


def _rule(klass: ProfileClass, bands: str | None, pv: bool, group: int) -> GroupRule:
    return GroupRule(
        profile_class=klass,
        bands=None if bands is None else frozenset(bands),
        has_pv=pv,
        group=GroupId(group),
    )


DEFAULT_RULES: tuple[GroupRule, ...] = (
    _rule(1, "ABC", False, 0),
    _rule(1, "D", False, 1),
    _rule(1, "E", False, 2),
    _rule(1, "FGH", False, 3),
    _rule(2, None, False, 4),
    _rule(2, None, True, 5),
    _rule(1, None, True, 6),
)


@dataclass(frozen=True, slots=True)
class GroupMapping:
    """An ordered rule list; the first matching rule decides the group."""

    rules: tuple[GroupRule, ...] = DEFAULT_RULES
    unknown_band_group: GroupId = UNKNOWN_BAND_GROUP

    @property
    def groups(self) -> list[GroupId]:
        return sorted({r.group for r in self.rules})

    def assign(self, attrs: CustomerAttributes, *, strict: bool = False) -> GroupId:
        for rule in self.rules:
            if rule.matches(attrs):
                return rule.group

        if attrs.council_tax_band is None and not strict:
            logger.warning(
                "Unknown council tax band; using fallback group",
                extra={
                    "profile_class": attrs.profile_class,
                    "has_pv": attrs.has_pv,
                    "group": int(self.unknown_band_group),
                },
            )
            return self.unknown_band_group

        raise GroupingError(f"no group rule matches {attrs}")

    @classmethod
    def load(cls, path: Path) -> GroupMapping:
        """Load override rules from CSV, or from TOML or YAML with a list of ``rule`` entries."""

        if path.suffix.lower() == ".csv":
            return cls._from_csv(path)
        return cls._from_document(path)

    @classmethod
    def _from_document(cls, path: Path) -> GroupMapping:
        raw = read_document(path, "group mapping")
        entries = raw.get("rule")
        if not isinstance(entries, list) or not entries:
            raise SchemaError(path, None, "expected at least one rule entry")
        if not all(isinstance(entry, dict) for entry in entries):
            raise SchemaError(path, None, "every rule entry must be a table")
        rules = [
            _parse_rule(
                path,
                idx,
                entry.get("profile_class"),
                entry.get("band", "*"),
                entry.get("has_pv"),
                entry.get("group"),
            )
            for idx, entry in enumerate(entries, start=1)
        ]
        unknown = raw.get("unknown_band_group", int(UNKNOWN_BAND_GROUP))
        return cls(rules=tuple(rules), unknown_band_group=GroupId(int(unknown)))

    @classmethod
    def _from_csv(cls, path: Path) -> GroupMapping:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        required = {"profile_class", "council_tax_band", "has_pv", "group"}
        if not required <= set(frame.columns):
            raise SchemaError(path, None, f"header must contain {sorted(required)}")
        rules = [
            _parse_rule(
                path,
                idx,
                row.profile_class,
                row.council_tax_band,
                row.has_pv,
                row.group,
            )
            for idx, row in enumerate(frame.itertuples(index=False), start=1)
        ]
        if not rules:
            raise SchemaError(path, None, "mapping file has no rules")
        return cls(rules=tuple(rules))


def _parse_rule(
    path: Path, row: int, klass: object, band: object, pv: object, group: object
) -> GroupRule:
    try:
        profile_class = int(str(klass))
        if profile_class not in (1, 2):
            raise ValueError("profile class must be 1 or 2")
        bands = _parse_band_spec(",".join(map(str, band)) if isinstance(band, list) else str(band))
        has_pv = parse_flag(pv if isinstance(pv, bool) else str(pv))
        group_id = int(str(group))
    except (ValueError, GroupingError) as e:
        raise SchemaError(path, row, str(e)) from e
    return GroupRule(
        profile_class=1 if profile_class == 1 else 2,
        bands=bands,
        has_pv=has_pv,
        group=GroupId(group_id),
    )


def _parse_band_spec(spec: str) -> frozenset[str] | None:
    tokens = [t.strip().upper() for t in spec.replace(";", ",").split(",") if t.strip()]
    if not tokens or any(t in _ANY_BAND_TOKENS for t in tokens):
        return None
    expanded: list[str] = []
    for t in tokens:
        # "ABC" is shorthand for "A, B, C".
        expanded.extend(t if len(t) > 1 and set(t) <= set(TAX_BANDS) else [t])
    bands = [parse_band(t) for t in expanded]
    return frozenset(b for b in bands if b is not None)


def assign_group(
    attrs: CustomerAttributes, mapping: GroupMapping | None = None, *, strict: bool = False
) -> GroupId:
    """Group of a customer under ``mapping`` (the default table when omitted)."""

    return (mapping or GroupMapping()).assign(attrs, strict=strict)


def representative_attributes(group: GroupId) -> CustomerAttributes:
    """A canonical attribute triple landing in ``group`` under the default table."""

    for rule in DEFAULT_RULES:
        if rule.group == group:
            band = "D" if rule.bands is None else sorted(rule.bands)[0]
            return CustomerAttributes(
                profile_class=rule.profile_class, council_tax_band=band, has_pv=rule.has_pv
            )
    raise GroupingError(f"group {group} is not part of the default grouping")
