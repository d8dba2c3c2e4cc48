"""Integer time intervals, per-cell safe/blocked interval sets and their algebra.

All planner-facing times are integer time steps.  Open-ended intervals use the
INF sentinel (float infinity); arithmetic on it saturates, it is never a large
magic number.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

INF = math.inf

Cell = tuple[int, int]


def to_fraction(x) -> Fraction:
    """Convert int/float/str/Fraction to an exact Fraction.

    Floats go through their shortest decimal repr, so a JSON literal like 3.7
    becomes exactly 37/10 instead of the binary approximation.
    """
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class TimeInterval:
    """Closed interval of time steps [lower, upper]; upper may be INF."""

    lower: int
    upper: int | float

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError(f"negative interval bound: {self.lower}")
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    def contains(self, t: int) -> bool:
        return self.lower <= t <= self.upper

    def shift(self, delta: int) -> "TimeInterval":
        return TimeInterval(self.lower + delta, self.upper + delta)

    def is_open_ended(self) -> bool:
        return self.upper == INF

    def as_pair(self):
        return (self.lower, self.upper)


def merge_intervals(intervals: Iterable[tuple[int, int | float]]) -> list[tuple[int, int | float]]:
    """Canonicalize integer-step intervals: sort and merge overlapping/adjacent.

    Adjacent means sharing consecutive steps ([1,2] and [3,4] merge to [1,4]).
    """
    items = sorted(intervals)
    merged: list[list[int | float]] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def intersect_interval_lists(a: Sequence[tuple[int, int | float]],
                             b: Sequence[tuple[int, int | float]]) -> list[tuple[int, int | float]]:
    """Intersection of two sorted disjoint interval lists (two-pointer sweep)."""
    out: list[tuple[int, int | float]] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return out


class SafeIntervalSet:
    """Ordered, disjoint, non-adjacent safe intervals of a single cell.

    A statically blocked cell has an empty set.  The last interval of a
    dynamically blocked but traversable cell is open-ended unless the set was
    built against a finite horizon.
    """

    __slots__ = ("intervals", "pairs", "_lowers")

    def __init__(self, intervals: Sequence[TimeInterval]):
        prev_hi = -2
        for iv in intervals:
            if iv.lower <= prev_hi + 1:
                raise ValueError(f"safe intervals not disjoint/sorted: {intervals}")
            prev_hi = iv.upper
        self.intervals = tuple(intervals)
        self.pairs = tuple(iv.as_pair() for iv in self.intervals)
        self._lowers = [iv.lower for iv in self.intervals]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __eq__(self, other):
        return isinstance(other, SafeIntervalSet) and self.intervals == other.intervals

    def __repr__(self):
        return f"SafeIntervalSet({list(self.intervals)!r})"

    def is_empty(self) -> bool:
        return not self.intervals

    def containing(self, t: int) -> Optional[TimeInterval]:
        """The unique safe interval containing step t, or None."""
        i = bisect_right(self._lowers, t) - 1
        if i >= 0 and self.intervals[i].contains(t):
            return self.intervals[i]
        return None

    def covers_span(self, lo: int, hi: int | float) -> bool:
        """True iff all steps in [lo, hi] lie inside one safe interval."""
        iv = self.containing(lo)
        return iv is not None and iv.upper >= hi


FULL_SAFE = SafeIntervalSet([TimeInterval(0, INF)])
EMPTY_SAFE = SafeIntervalSet([])


@dataclass(frozen=True)
class OccupancyEvent:
    """One contiguous touch of a cell by a moving obstacle, in real seconds."""

    cell: Cell
    enter: Fraction
    leave: Fraction

    def __post_init__(self):
        if self.enter < 0 or self.leave < 0:
            raise ValueError(f"negative event time on cell {self.cell}")
        if self.enter > self.leave:
            raise ValueError(f"event leaves before it enters on cell {self.cell}")


def make_event(cell: Cell, enter, leave) -> OccupancyEvent:
    return OccupancyEvent(tuple(cell), to_fraction(enter), to_fraction(leave))


def blocked_from_events(events: Iterable[OccupancyEvent],
                        time_step: Fraction) -> dict[Cell, list[tuple[int, int]]]:
    """Discretize occupancy events into per-cell merged blocked step intervals.

    Real endpoints round outward: enter floors, leave ceils, so every step
    during which the obstacle touches the cell is inside a blocked interval.
    """
    step = to_fraction(time_step)
    raw: dict[Cell, list[tuple[int, int]]] = {}
    for ev in events:
        lo = math.floor(ev.enter / step)
        hi = math.ceil(ev.leave / step)
        raw.setdefault(ev.cell, []).append((lo, hi))
    return {cell: [(lo, int(hi)) for lo, hi in merge_intervals(ivs)]
            for cell, ivs in raw.items()}


def invert_to_safe(blocked: Sequence[tuple[int, int]], cell_static_free: bool,
                   horizon: Optional[int] = None) -> SafeIntervalSet:
    """Complement of a cell's blocked intervals over [0, horizon or INF).

    A statically blocked cell yields the empty set regardless of events.
    """
    if not cell_static_free:
        return EMPTY_SAFE
    end: int | float = INF if horizon is None else horizon
    out: list[TimeInterval] = []
    cursor = 0
    for lo, hi in blocked:
        if lo > end:
            break
        if lo > cursor:
            out.append(TimeInterval(cursor, min(lo - 1, end)))
        cursor = max(cursor, hi + 1)
    if cursor <= end:
        out.append(TimeInterval(cursor, end))
    return SafeIntervalSet(out)


class SafeTable:
    """Per-cell SafeIntervalSet lookup for one problem instance.

    Cells without obstacle events resolve lazily to the fully-safe (or
    horizon-clipped) set; statically blocked cells resolve to the empty set.
    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, grid, blocked: dict[Cell, Sequence[tuple[int, int]]],
                 horizon: Optional[int] = None):
        self.grid = grid
        self.horizon = horizon
        self._default = FULL_SAFE if horizon is None else SafeIntervalSet(
            [TimeInterval(0, horizon)])
        self._sets: dict[Cell, SafeIntervalSet] = {}
        self._blocked = {cell: list(ivs) for cell, ivs in blocked.items()}
        for cell, ivs in self._blocked.items():
            self._sets[cell] = invert_to_safe(ivs, grid.is_traversable(*cell), horizon)

    def safe_set(self, row: int, col: int) -> SafeIntervalSet:
        got = self._sets.get((row, col))
        if got is not None:
            return got
        return self._default if self.grid.is_traversable(row, col) else EMPTY_SAFE

    def blocked_list(self, row: int, col: int) -> list[tuple[int, int]]:
        return self._blocked.get((row, col), [])

    def last_blocked_step(self) -> int:
        """Largest finite blocked step over all cells; -1 when nothing is blocked."""
        last = -1
        for ivs in self._blocked.values():
            if ivs:
                last = max(last, ivs[-1][1])
        return last
