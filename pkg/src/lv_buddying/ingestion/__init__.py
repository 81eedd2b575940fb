"""Reading, cleaning and writing profile, substation and registry files."""

from lv_buddying.domain.series import window
from lv_buddying.ingestion.cleaning import FlaggedSeries, Quality, clean_series
from lv_buddying.ingestion.loaders import (
    CsvSchema,
    RawReadingTable,
    load_customers,
    load_feeders,
    load_profile_attributes,
    load_profiles,
    load_substations,
    registry_profile_attributes,
)
from lv_buddying.ingestion.writers import (
    write_customers_csv,
    write_profile_attributes_csv,
    write_profiles_csv,
    write_substations_csv,
)

__all__ = [
    "CsvSchema",
    "FlaggedSeries",
    "Quality",
    "RawReadingTable",
    "clean_series",
    "load_customers",
    "load_feeders",
    "load_profile_attributes",
    "load_profiles",
    "load_substations",
    "registry_profile_attributes",
    "window",
    "write_customers_csv",
    "write_profile_attributes_csv",
    "write_profiles_csv",
    "write_substations_csv",
]
