"""The simple buddy: closest mean daily demand within the customer's group.

Uses only mean daily demands; substation readings play no part.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from lv_buddying.domain.types import BuddyAssignment, BuddyMethod, Feeder, MonitoredProfile
from lv_buddying.methods.candidates import CandidateIndex, ProfilePool


def simple_buddy(
    feeder: Feeder, pool: ProfilePool | Iterable[MonitoredProfile]
) -> BuddyAssignment:
    """Assign each customer the in-group profile minimising |U_j − Û_k|.

    Ties go to the lowest profile id; monitored customers keep their own profile.
    """

    index = CandidateIndex(feeder, ProfilePool.of(pool))
    genome = np.empty(index.n_customers, dtype=np.int64)
    for j, cands in enumerate(index.candidates):
        # argmin returns the first minimum, and candidates are in profile-id order.
        gaps = np.abs(index.demands[j] - index.pool.means[cands])
        genome[j] = cands[int(np.argmin(gaps))]

    return BuddyAssignment(
        feeder_id=feeder.feeder_id,
        profiles=index.to_profile_ids(genome),
        method=BuddyMethod.SIMPLE,
        weight=1.0,
        fitness=float(index.mean_mismatch(genome[np.newaxis, :])[0]),
    )


def mean_demand_mismatch(
    feeder: Feeder, pool: ProfilePool | Iterable[MonitoredProfile], assignment: BuddyAssignment
) -> float:
    """Σ_j |U_j − Û_{k_j}| of an assignment, the quantity the simple buddy minimises."""

    index = CandidateIndex(feeder, ProfilePool.of(pool))
    genome = index.from_assignment(assignment)
    return float(index.mean_mismatch(genome[np.newaxis, :])[0])
