"""Safe-interval baselines: classic SIPP and the two kinodynamic retrofits.

All three search (configuration, safe interval) nodes with earliest-arrival
g-values and commit each move at the earliest collision-free departure that
lands in a target safe interval.  Departure delays (wait-and-move) are taken
from the node's safe-interval window only where the agent can physically
wait, i.e. at zero velocity; elsewhere moves depart exactly at the arrival
time.

Variants:
  classic  - checks each swept cell at its first-touch instant only, as if
             the agent swept through instantaneously; may return plans that
             collide mid-dwell.  The invalidity baseline.
  sipp1    - full sweep checks, one node per (configuration, safe interval).
             Incomplete: committed arrival times are final.
  sipp2    - sipp1 plus re-expansion: a nonzero-velocity node re-enters OPEN
             when reached at an arrival time not seen before in the same
             safe interval.  Still incomplete.
"""

from __future__ import annotations

import itertools
import time
from heapq import heappop, heappush
from typing import Optional

from ..instance import ProblemInstance
from ..intervals import INF, TimeInterval, intersect_interval_lists
from ..kinodynamics import Configuration, apply_primitive
from .common import (PlanOutcome, SearchLimits, STATUS_NO_SOLUTION, STATUS_RESOURCE_LIMIT,
                     STATUS_SOLVED, Trajectory, TrajectoryStep, make_heuristic,
                     search_horizon)


class _FNode:
    __slots__ = ("config", "si", "t", "parent", "via", "dep")

    def __init__(self, config, si, t, parent=None, via=None, dep=None):
        self.config = config
        self.si = si          # containing safe interval of the config's cell
        self.t = t            # committed (earliest known) arrival time
        self.parent = parent
        self.via = via
        self.dep = dep        # departure time of `via` at the parent


def find_path_classic(instance, limits=None, *, debug=False) -> PlanOutcome:
    return _family_search(instance, limits, first_touch=True, reexpand=False, debug=debug)


def find_path_sipp1(instance, limits=None, *, debug=False) -> PlanOutcome:
    return _family_search(instance, limits, first_touch=False, reexpand=False, debug=debug)


def find_path_sipp2(instance, limits=None, *, debug=False) -> PlanOutcome:
    return _family_search(instance, limits, first_touch=False, reexpand=True, debug=debug)


def _valid_departures(fp, table):
    """Departure steps keeping every swept span inside one safe interval.

    Erosion of each cell's safe intervals by its sweep window, intersected
    across the footprint; sorted disjoint intervals.
    """
    deps = None
    for row, col, lb, ub in fp:
        cell_ok = []
        for si in table.safe_set(row, col):
            lo = si.lower - lb
            hi = si.upper - ub  # INF stays INF
            if hi >= lo:
                cell_ok.append((max(0, lo), hi))
        deps = cell_ok if deps is None else intersect_interval_lists(deps, cell_ok)
        if not deps:
            return []
    return deps


def _earliest_in(intervals, lo, hi) -> Optional[int]:
    for a, b in intervals:
        if b < lo:
            continue
        if a > hi:
            return None
        return max(a, lo)
    return None


def _family_search(instance: ProblemInstance, limits: Optional[SearchLimits], *,
                   first_touch: bool, reexpand: bool, debug: bool) -> PlanOutcome:
    t0 = time.perf_counter()
    limits = limits or SearchLimits()
    table = instance.safe_table(limits.horizon)
    horizon = search_horizon(instance, limits)
    start = instance.start
    t_start = instance.t_start

    outcome = PlanOutcome(status=STATUS_NO_SOLUTION, trace=[] if debug else None)
    if not instance.goal_statically_reachable():
        outcome.runtime = time.perf_counter() - t0
        return outcome
    start_si = table.safe_set(*start.cell).containing(t_start)
    if start_si is None:
        outcome.runtime = time.perf_counter() - t0
        return outcome

    heap: list = []
    counter = itertools.count()
    best: dict = {}          # identity -> best-known node (min arrival)
    seen_times: dict = {}    # identity -> set of admitted arrivals (reexpansion)
    closed: set = set()
    dep_cache: dict = {}

    def identity(config, si):
        return (config, si.lower)

    h_of = make_heuristic(instance.goal_cell, instance.params)

    def push(node: _FNode):
        cfg = node.config
        h = h_of(cfg.row, cfg.col)
        heappush(heap, (node.t + h, h, cfg.row, cfg.col, cfg.heading, cfg.velocity,
                        node.t, next(counter), node))

    root = _FNode(start, start_si, t_start)
    best[identity(start, start_si)] = root
    seen_times.setdefault(identity(start, start_si), set()).add(t_start)
    generations = 1
    expansions = 0
    push(root)

    goal_node = None
    while heap:
        node = heappop(heap)[-1]
        cfg = node.config
        ident = identity(cfg, node.si)
        if reexpand and cfg.velocity != 0:
            if (ident, node.t) in closed:
                continue
            closed.add((ident, node.t))
        else:
            if ident in closed or best[ident] is not node:
                continue
            closed.add(ident)
        expansions += 1
        if outcome.trace is not None:
            outcome.trace.append((cfg, node.si.as_pair(), node.t))
        if instance.is_goal(cfg):
            goal_node = node
            break

        window_hi = node.si.upper if cfg.can_wait() else node.t
        for prim in instance.primitives.from_velocity(cfg.velocity):
            fp = instance.footprint(cfg, prim)
            if fp is None:
                continue
            if first_touch:
                fp = tuple((r, c, lb, lb) for r, c, lb, _ub in fp)
            key = (cfg.row, cfg.col, cfg.heading, prim.name)
            deps = dep_cache.get(key)
            if deps is None:
                deps = _valid_departures(fp, table)
                dep_cache[key] = deps
            if not deps:
                continue
            w = prim.duration
            succ_cfg = apply_primitive(cfg, prim)
            for sj in table.safe_set(*succ_cfg.cell):
                dep_lo = max(node.t, sj.lower - w)
                dep_hi = min(window_hi, sj.upper - w)
                if dep_lo > dep_hi:
                    continue
                dep = _earliest_in(deps, dep_lo, dep_hi)
                if dep is None:
                    continue
                arrival = dep + w
                if arrival > horizon:
                    continue
                generations += 1
                if generations > limits.max_generated:
                    outcome.status = STATUS_RESOURCE_LIMIT
                    outcome.expansions = expansions
                    outcome.generations = generations
                    outcome.runtime = time.perf_counter() - t0
                    return outcome
                sident = (succ_cfg, sj.lower)
                if reexpand and succ_cfg.velocity != 0:
                    times = seen_times.setdefault(sident, set())
                    if arrival in times:
                        continue
                    times.add(arrival)
                    push(_FNode(succ_cfg, sj, arrival, node, prim, dep))
                else:
                    if sident in closed:
                        continue
                    existing = best.get(sident)
                    if existing is not None and existing.t <= arrival:
                        continue
                    succ = _FNode(succ_cfg, sj, arrival, node, prim, dep)
                    best[sident] = succ
                    push(succ)

    if goal_node is not None:
        steps: list[TrajectoryStep] = []
        node = goal_node
        while node.parent is not None:
            steps.append(TrajectoryStep(node.via, node.dep))
            node = node.parent
        steps.reverse()
        cost = steps[-1].start + steps[-1].primitive.duration if steps else t_start
        outcome.status = STATUS_SOLVED
        outcome.trajectory = Trajectory(start_config=start, steps=tuple(steps), cost=cost)

    outcome.expansions = expansions
    outcome.generations = generations
    outcome.runtime = time.perf_counter() - t0
    return outcome
