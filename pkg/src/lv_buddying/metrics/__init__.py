"""Error measures, error reports and power-law fits of error against feeder size."""

from lv_buddying.metrics.accuracy import per_customer_rmae, rmae, rpde
from lv_buddying.metrics.powerlaw import BandSample, PowerLawFit, fit_power_law
from lv_buddying.metrics.reports import (
    FeederErrorReport,
    evaluate_assignment,
    write_reports_csv,
    write_reports_json,
)

__all__ = [
    "BandSample",
    "FeederErrorReport",
    "PowerLawFit",
    "evaluate_assignment",
    "fit_power_law",
    "per_customer_rmae",
    "rmae",
    "rpde",
    "write_reports_csv",
    "write_reports_json",
]
