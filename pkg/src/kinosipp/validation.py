"""Independent trajectory checker.

Replays a trajectory step by step against the instance, recomputing agent
occupancy from the primitive sweep tables and obstacle occupancy from the raw
events.  Shares only data types with the planners and the projection engine;
sweep spans are treated as closed on both ends, matching the conservative
rounding used everywhere else.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .instance import ProblemInstance
from .kinodynamics import apply_primitive, primitive_footprint
from .planners.common import Trajectory

CHAIN_BREAK = "chain_break"
ILLEGAL_WAIT = "illegal_wait"
STATIC_COLLISION = "static_collision"
DYNAMIC_COLLISION = "dynamic_collision"
BAD_COST = "bad_cost"


class Violation(NamedTuple):
    kind: str
    time: int
    cell: Optional[tuple[int, int]]


@dataclass
class ValidationReport:
    valid: bool
    violations: list[Violation] = field(default_factory=list)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class _BlockedTables:
    """Per-cell blocked step intervals recomputed straight from the events."""

    def __init__(self, instance: ProblemInstance):
        step = instance.params.time_step
        raw: dict = {}
        for ev in instance.events:
            lo = math.floor(ev.enter / step)
            hi = math.ceil(ev.leave / step)
            raw.setdefault(ev.cell, []).append((lo, hi))
        self._starts: dict = {}
        self._ends: dict = {}
        for cell, spans in raw.items():
            spans.sort()
            merged = []
            for lo, hi in spans:
                if merged and lo <= merged[-1][1] + 1:
                    merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
                else:
                    merged.append((lo, hi))
            self._starts[cell] = [s for s, _ in merged]
            self._ends[cell] = [e for _, e in merged]

    def first_blocked_in(self, cell, lo: int, hi: int) -> Optional[int]:
        """Earliest blocked step inside [lo, hi] at cell, or None."""
        starts = self._starts.get(cell)
        if not starts:
            return None
        ends = self._ends[cell]
        k = bisect_right(starts, hi) - 1
        if k >= 0 and ends[k] >= lo:
            # walk left to the earliest overlapping interval
            while k > 0 and ends[k - 1] >= lo:
                k -= 1
            return max(starts[k], lo)
        return None


def validate(trajectory: Trajectory, instance: ProblemInstance) -> ValidationReport:
    """Certify feasibility and collision-freedom; reports every violation found."""
    report = ValidationReport(valid=True)
    blocked = _BlockedTables(instance)
    grid = instance.grid

    def flag(kind, time, cell=None):
        report.violations.append(Violation(kind, time, cell))

    config = trajectory.start_config
    t = instance.t_start
    if not grid.is_traversable(*config.cell):
        flag(STATIC_COLLISION, t, config.cell)

    for prim, start in trajectory.steps:
        if start < t:
            flag(CHAIN_BREAK, start, config.cell)
        elif start > t:
            if config.velocity != 0:
                flag(ILLEGAL_WAIT, t, config.cell)
            else:
                hit = blocked.first_blocked_in(config.cell, t, start)
                if hit is not None:
                    flag(DYNAMIC_COLLISION, hit, config.cell)
        if prim.source_velocity != config.velocity:
            flag(CHAIN_BREAK, start, config.cell)
        fp = primitive_footprint(config, prim, grid)
        if fp is None:
            flag(STATIC_COLLISION, start, config.cell)
        else:
            for row, col, lb, ub in fp:
                hit = blocked.first_blocked_in((row, col), start + lb, start + ub)
                if hit is not None:
                    flag(DYNAMIC_COLLISION, hit, (row, col))
        config = apply_primitive(config, prim)
        t = start + prim.duration

    if trajectory.cost != t:
        flag(BAD_COST, t, None)

    report.valid = not report.violations
    return report
