"""Time-stepped best-first search: states are (configuration, arrival step).

Moves apply collision-checked primitives; a one-step wait successor exists
only at zero velocity.  Serves as the completeness/optimality oracle for the
interval planner, bounded by the instance horizon.
"""

from __future__ import annotations

import itertools
import time
from heapq import heappop, heappush
from typing import Optional

from ..instance import ProblemInstance
from .common import (PlanOutcome, SearchLimits, STATUS_NO_SOLUTION, STATUS_RESOURCE_LIMIT,
                     STATUS_SOLVED, Trajectory, TrajectoryStep, make_heuristic,
                     search_horizon)
from ..kinodynamics import apply_primitive


def find_path(instance: ProblemInstance, limits: Optional[SearchLimits] = None, *,
              debug: bool = False) -> PlanOutcome:
    t0 = time.perf_counter()
    limits = limits or SearchLimits()
    table = instance.safe_table(limits.horizon)
    horizon = search_horizon(instance, limits)
    start = instance.start
    t_start = instance.t_start
    wait_len = instance.params.wait_duration

    outcome = PlanOutcome(status=STATUS_NO_SOLUTION, trace=[] if debug else None)
    if not instance.goal_statically_reachable():
        outcome.runtime = time.perf_counter() - t0
        return outcome
    if table.safe_set(*start.cell).containing(t_start) is None:
        outcome.runtime = time.perf_counter() - t0
        return outcome

    heap: list = []
    counter = itertools.count()
    closed: set = set()
    parents: dict = {}
    start_key = (start, t_start)
    parents[start_key] = None
    h_of = make_heuristic(instance.goal_cell, instance.params)

    def push(config, t):
        h = h_of(config.row, config.col)
        heappush(heap, (t + h, h, config.row, config.col, config.heading,
                        config.velocity, t, next(counter), config))

    generations = 1
    expansions = 0
    push(start, t_start)

    goal_key = None
    while heap:
        f, h, _r, _c, _hd, _v, t, _n, config = heappop(heap)
        key = (config, t)
        if key in closed:
            continue
        closed.add(key)
        expansions += 1
        if outcome.trace is not None:
            outcome.trace.append((config, t))
        if instance.is_goal(config):
            goal_key = key
            break

        for prim in instance.primitives.from_velocity(config.velocity):
            fp = instance.footprint(config, prim)
            if fp is None:
                continue
            arrival = t + prim.duration
            if arrival > horizon:
                continue
            succ = apply_primitive(config, prim)
            if arrival + h_of(succ.row, succ.col) > horizon:
                continue
            ok = True
            for row, col, lb, ub in fp:
                if not table.safe_set(row, col).covers_span(t + lb, t + ub):
                    ok = False
                    break
            if not ok:
                continue
            skey = (succ, arrival)
            generations += 1
            if generations > limits.max_generated:
                return _limit(outcome, expansions, generations, t0)
            if skey not in closed:
                if skey not in parents:
                    parents[skey] = (key, prim)
                push(succ, arrival)

        if config.can_wait():
            t_wait = t + wait_len
            if (t_wait + h <= horizon
                    and table.safe_set(*config.cell).covers_span(t, t_wait)):
                skey = (config, t_wait)
                generations += 1
                if generations > limits.max_generated:
                    return _limit(outcome, expansions, generations, t0)
                if skey not in closed:
                    if skey not in parents:
                        parents[skey] = (key, None)
                    push(config, t_wait)

    if goal_key is not None:
        steps: list[TrajectoryStep] = []
        key = goal_key
        while parents[key] is not None:
            pkey, prim = parents[key]
            if prim is not None:
                steps.append(TrajectoryStep(prim, pkey[1]))
            key = pkey
        steps.reverse()
        cost = goal_key[1]
        outcome.status = STATUS_SOLVED
        outcome.trajectory = Trajectory(start_config=start, steps=tuple(steps), cost=cost)

    outcome.expansions = expansions
    outcome.generations = generations
    outcome.runtime = time.perf_counter() - t0
    return outcome


def _limit(outcome: PlanOutcome, expansions: int, generations: int, t0: float) -> PlanOutcome:
    outcome.status = STATUS_RESOURCE_LIMIT
    outcome.expansions = expansions
    outcome.generations = generations
    outcome.runtime = time.perf_counter() - t0
    return outcome
