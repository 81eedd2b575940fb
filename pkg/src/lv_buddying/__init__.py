"""LV network buddying.

Models unmonitored low-voltage customers by assigning each a real half-hourly smart meter
profile, chosen by a simple mean-demand rule, a genetic algorithm fitted to substation
readings, or random sampling. Includes pseudo-feeder validation and experiment sweeps.
"""

__version__ = "0.1.0"

from lv_buddying.config import BuddySettings, RunConfig

__all__ = ["__version__", "BuddySettings", "RunConfig"]
