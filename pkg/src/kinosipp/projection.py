"""Time-interval projection through a primitive's swept cells.

Two routes compute the same thing: `project_intervals` walks the swept-cell
sequence clipping interval endpoints (fast path used by the planner), and
`project_naive` simulates every departure step (independent oracle).  Both
return the collision-free arrival intervals at the primitive's end
configuration.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .intervals import INF, SafeIntervalSet, TimeInterval, merge_intervals

# Absolute swept cell: (row, col, lb, ub) with lb/ub relative to departure.
Footprint = Sequence[tuple[int, int, int, int]]
SafeLookup = Callable[[int, int], SafeIntervalSet]

ProjectionResult = list[TimeInterval]


def project_pairs(lower: int, upper, footprint: Footprint, duration: int,
                  safe_lookup: SafeLookup) -> list[tuple[int, int | float]]:
    """Allocation-light projection core over (lower, upper) pairs.

    Stage results are canonically merged: two projected intervals can land
    overlapping inside one safe interval and a literal endpoint walk would
    keep both.
    """
    current = [(lower, upper)]
    t = 0
    for row, col, lb, ub in footprint:
        delta = lb - t
        t = lb
        dwell = ub - lb
        new = []
        for lo, hi in current:
            for slo, shi in safe_lookup(row, col).pairs:
                earliest = lo + delta
                if slo > earliest:
                    earliest = slo
                latest = hi + delta
                cap = shi - dwell
                if cap < latest:
                    latest = cap
                if earliest <= latest:
                    new.append((earliest, latest))
        if not new:
            return []
        current = merge_intervals(new) if len(new) > 1 else new
    shift = duration - footprint[-1][2]
    if shift:
        return [(lo + shift, hi + shift) for lo, hi in current]
    return current


def project_intervals(node_interval: TimeInterval, footprint: Footprint,
                      duration: int, safe_lookup: SafeLookup,
                      return_stages: bool = False):
    """Project a departure interval through the swept cells sequentially.

    Every output interval lies inside a single safe interval of the target
    cell, outputs are pairwise disjoint, and every collision-free departure
    step in the input has its arrival step covered.  With return_stages the
    per-cell surviving first-touch intervals are reported as well.
    """
    if not return_stages:
        pairs = project_pairs(node_interval.lower, node_interval.upper,
                              footprint, duration, safe_lookup)
        return [TimeInterval(lo, hi) for lo, hi in pairs]

    current: list[tuple[int, int | float]] = [node_interval.as_pair()]
    stages: list[list[tuple[int, int | float]]] = []
    t = 0
    for row, col, lb, ub in footprint:
        delta = lb - t
        t = lb
        dwell = ub - lb
        new: list[tuple[int, int | float]] = []
        for lo, hi in current:
            for slo, shi in safe_lookup(row, col).pairs:
                earliest = max(lo + delta, slo)
                latest = min(hi + delta, shi - dwell)
                if earliest <= latest:
                    new.append((earliest, latest))
        current = merge_intervals(new)
        stages.append(list(current))
    shift = duration - footprint[-1][2]
    result = [TimeInterval(lo + shift, hi + shift) for lo, hi in current]
    return result, stages


def project_naive(node_interval: TimeInterval, footprint: Footprint,
                  duration: int, safe_lookup: SafeLookup) -> ProjectionResult:
    """Oracle: simulate each departure step and group surviving arrivals.

    The caller must clip open-ended inputs to a finite horizon first.
    """
    if node_interval.is_open_ended():
        raise ValueError("clip open-ended intervals to the horizon before naive projection")
    arrivals: list[int] = []
    for dep in range(node_interval.lower, int(node_interval.upper) + 1):
        ok = True
        for row, col, lb, ub in footprint:
            if not safe_lookup(row, col).covers_span(dep + lb, dep + ub):
                ok = False
                break
        if ok:
            arrivals.append(dep + duration)
    out: list[TimeInterval] = []
    for t in arrivals:
        if out and t == out[-1].upper + 1:
            out[-1] = TimeInterval(out[-1].lower, t)
        else:
            out.append(TimeInterval(t, t))
    return out


def extend_wait(intervals: Sequence[TimeInterval], target_allows_wait: bool,
                target_safe: SafeIntervalSet) -> ProjectionResult:
    """Raise each interval's upper bound to its safe interval's, if waiting is legal.

    Intervals that become overlapping afterwards merge keeping the minimal
    lower bound.  With waiting unavailable the input is returned unchanged.
    """
    if not target_allows_wait:
        return list(intervals)
    raised = []
    for ti in intervals:
        si = target_safe.containing(ti.lower)
        if si is None or si.upper < ti.upper:
            raise ValueError(f"interval {ti} does not lie in a safe interval of the target")
        raised.append((ti.lower, si.upper))
    return [TimeInterval(lo, hi) for lo, hi in merge_intervals(raised)]


def extend_wait_pairs(pairs: list[tuple[int, int | float]],
                      target_safe: SafeIntervalSet) -> list[tuple[int, int | float]]:
    """Pair-based wait extension for the planner hot path."""
    raised = []
    for lo, hi in pairs:
        si = target_safe.containing(lo)
        if si is None or si.upper < hi:
            raise ValueError(f"interval ({lo}, {hi}) does not lie in a safe interval")
        raised.append((lo, si.upper))
    return merge_intervals(raised) if len(raised) > 1 else raised
