"""Indexed monitored-profile pool and per-customer candidate sets.

Every buddying method draws from the same structure: profiles sorted by id (so ties and
random draws do not depend on input order), one candidate array per customer holding the
pool positions of its group, and monitored customers pinned to their own profile.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from datetime import date

import numpy as np
import numpy.typing as npt

from lv_buddying.domain.series import FloatArray, HalfHourlySeries, slice_days
from lv_buddying.domain.types import BuddyAssignment, Feeder, MonitoredProfile
from lv_buddying.errors import GroupingError, InvalidInputError
from lv_buddying.grouping import GroupId

IntArray = npt.NDArray[np.int64]


class ProfilePool:
    """Monitored profiles with fast access to means, groups and windowed series."""

    def __init__(self, profiles: Iterable[MonitoredProfile]) -> None:
        ordered = sorted(profiles, key=lambda p: p.profile_id)
        ids = [p.profile_id for p in ordered]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("profile pool contains duplicate profile ids")
        self._profiles: tuple[MonitoredProfile, ...] = tuple(ordered)
        self._position = {pid: i for i, pid in enumerate(ids)}
        self.means: FloatArray = np.array([p.mean_daily_demand for p in ordered], dtype=float)
        self.groups: IntArray = np.array([int(p.group) for p in ordered], dtype=np.int64)
        self._windows: dict[tuple[date, date], FloatArray] = {}

    @classmethod
    def of(cls, pool: ProfilePool | Iterable[MonitoredProfile]) -> ProfilePool:
        return pool if isinstance(pool, ProfilePool) else cls(pool)

    def __len__(self) -> int:
        return len(self._profiles)

    def __iter__(self) -> Iterator[MonitoredProfile]:
        return iter(self._profiles)

    @property
    def profiles(self) -> tuple[MonitoredProfile, ...]:
        return self._profiles

    @property
    def ids(self) -> list[str]:
        return [p.profile_id for p in self._profiles]

    def position(self, profile_id: str) -> int | None:
        return self._position.get(profile_id)

    def get(self, profile_id: str) -> MonitoredProfile:
        pos = self._position.get(profile_id)
        if pos is None:
            raise KeyError(profile_id)
        return self._profiles[pos]

    def in_group(self, group: GroupId) -> IntArray:
        """Pool positions of ``group`` in profile-id order."""

        return np.flatnonzero(self.groups == int(group)).astype(np.int64)

    def matrix(self, start: date, end: date) -> FloatArray:
        """(profiles, slots) matrix of every profile sliced to ``[start, end]``."""

        key = (start, end)
        cached = self._windows.get(key)
        if cached is None:
            if not self._profiles:
                raise InvalidInputError("profile pool is empty")
            cached = np.stack([slice_days(p.series, start, end).values for p in self._profiles])
            cached.setflags(write=False)
            self._windows[key] = cached
        return cached

    def series(self, profile_id: str, start: date, end: date) -> HalfHourlySeries:
        return slice_days(self.get(profile_id).series, start, end)


class CandidateIndex:
    """Candidate pool positions for each customer of one feeder, in customer order."""

    def __init__(self, feeder: Feeder, pool: ProfilePool) -> None:
        self.feeder = feeder
        self.pool = pool
        candidates: list[IntArray] = []
        pinned: list[bool] = []
        for customer in feeder.customers:
            own = (
                pool.position(customer.monitored_profile)
                if customer.monitored_profile is not None
                else None
            )
            if own is not None:
                candidates.append(np.array([own], dtype=np.int64))
                pinned.append(True)
                continue
            group_positions = pool.in_group(customer.group)
            if group_positions.size == 0:
                raise GroupingError(
                    f"customer {customer.customer_id} on feeder {feeder.feeder_id}: "
                    f"no monitored profiles in group {customer.group}"
                )
            candidates.append(group_positions)
            pinned.append(False)

        self.candidates: tuple[IntArray, ...] = tuple(candidates)
        self.pinned: npt.NDArray[np.bool_] = np.array(pinned, dtype=bool)
        self.sizes: IntArray = np.array([c.size for c in candidates], dtype=np.int64)
        self.demands: FloatArray = np.array(
            [c.mean_daily_demand for c in feeder.customers], dtype=float
        )

    @property
    def n_customers(self) -> int:
        return len(self.candidates)

    def random_genomes(self, n: int, rng: np.random.Generator) -> IntArray:
        """``n`` uniform group-respecting assignments, shape (n, customers).

        One (n, customers) block of uniforms is drawn per call, so the stream consumed does not
        depend on group sizes.
        """

        u = rng.random((n, self.n_customers))
        picks = np.minimum((u * self.sizes).astype(np.int64), self.sizes - 1)
        out = np.empty((n, self.n_customers), dtype=np.int64)
        for j, cands in enumerate(self.candidates):
            out[:, j] = cands[picks[:, j]]
        return out

    def mean_mismatch(self, genomes: IntArray) -> FloatArray:
        """Σ_j |U_j − Û_{k_j}| for each genome row."""

        return np.abs(self.pool.means[genomes] - self.demands).sum(axis=1)

    def to_profile_ids(self, genome: Sequence[int] | IntArray) -> dict[str, str]:
        ids = self.pool.ids
        return {
            c.customer_id: ids[int(pos)]
            for c, pos in zip(self.feeder.customers, genome, strict=True)
        }

    def from_assignment(self, assignment: BuddyAssignment) -> IntArray:
        positions = []
        for c in self.feeder.customers:
            pos = self.pool.position(assignment.profile_for(c.customer_id))
            if pos is None:
                raise InvalidInputError(
                    f"assigned profile for {c.customer_id} is not in the pool"
                )
            positions.append(pos)
        return np.array(positions, dtype=np.int64)
