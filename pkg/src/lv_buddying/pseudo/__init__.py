"""Synthetic profile pools and pseudo-feeders for validating buddying methods."""

from lv_buddying.pseudo.feeders import (
    PseudoFeeder,
    PseudoType,
    build_suite,
    make_type1,
    make_type2,
    make_type2_split,
    pool_group_mix,
    random_template,
    recovery_rate,
)
from lv_buddying.pseudo.storage import PseudoSuite, SuiteManifest, load_suite, write_suite
from lv_buddying.pseudo.synthetic import (
    DemandLevel,
    SyntheticPoolSpec,
    Volatility,
    generate_pool,
    group_counts,
    synthesize_profile,
)

__all__ = [
    "DemandLevel",
    "PseudoFeeder",
    "PseudoSuite",
    "PseudoType",
    "SuiteManifest",
    "SyntheticPoolSpec",
    "Volatility",
    "build_suite",
    "generate_pool",
    "group_counts",
    "load_suite",
    "make_type1",
    "make_type2",
    "make_type2_split",
    "pool_group_mix",
    "random_template",
    "recovery_rate",
    "synthesize_profile",
    "write_suite",
]
