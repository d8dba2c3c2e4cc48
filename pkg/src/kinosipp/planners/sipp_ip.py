"""Complete and optimal safe-interval search with waiting-interval projection.

Search nodes are (configuration, waiting interval).  Expansion projects the
node's interval through every applicable primitive's swept cells, extends the
results to the containing safe interval's end where the target can wait, and
prunes dominated duplicates.  The first goal pop is optimal.
"""

from __future__ import annotations

import itertools
import time
from heapq import heappop, heappush
from typing import Optional

from ..instance import ProblemInstance
from ..intervals import INF, TimeInterval
from ..kinodynamics import Configuration, MotionPrimitive, apply_primitive
from ..projection import extend_wait_pairs, project_pairs
from .common import (PlanOutcome, SearchLimits, STATUS_NO_SOLUTION, STATUS_RESOURCE_LIMIT,
                     STATUS_SOLVED, Trajectory, TrajectoryStep, make_heuristic)


class _Node:
    __slots__ = ("config", "lower", "upper", "parent", "via", "stale")

    def __init__(self, config, lower, upper, parent=None, via=None):
        self.config = config
        self.lower = lower
        self.upper = upper
        self.parent = parent
        self.via = via
        self.stale = False


def dominates(existing: tuple[int, int | float], candidate: tuple[int, int | float]) -> bool:
    """True iff the existing node's waiting interval contains the candidate's.

    A dominated candidate's atomic states are a subset of the dominator's, so
    discarding it preserves completeness.
    """
    return existing[0] <= candidate[0] and existing[1] >= candidate[1]


def reconstruct_path(goal_node: _Node, t_start: int) -> Trajectory:
    """Walk parents backwards committing departures.

    At wait-capable nodes the move into the node is committed at the node's
    earliest arrival; elsewhere the running arrival time propagates backwards
    by the primitive duration.  Any residue over t_start is a leading wait.
    """
    steps: list[TrajectoryStep] = []
    node = goal_node
    t = goal_node.lower
    while node.parent is not None:
        prim = node.via
        if node.config.can_wait():
            start = node.lower - prim.duration
        else:
            start = t - prim.duration
        if start < t_start:
            raise RuntimeError("broken parent chain: departure before start time")
        steps.append(TrajectoryStep(prim, start))
        t = start
        node = node.parent
    steps.reverse()
    cost = steps[-1].start + steps[-1].primitive.duration if steps else t_start
    return Trajectory(start_config=node.config, steps=tuple(steps), cost=cost)


def find_path(instance: ProblemInstance, limits: Optional[SearchLimits] = None, *,
              paper_exact_open: bool = False, debug: bool = False) -> PlanOutcome:
    """Interval-projection search over (configuration, waiting interval) nodes.

    With paper_exact_open the duplicate policy is a literal identity skip on
    exactly equal intervals; the default prunes dominated intervals and
    replaces dominated OPEN entries (decrease-key semantics).
    """
    t0 = time.perf_counter()
    limits = limits or SearchLimits()
    table = instance.safe_table(limits.horizon)
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
    upper = start_si.upper if start.can_wait() else t_start
    root = _Node(start, t_start, upper)

    heap: list = []
    counter = itertools.count()
    open_by_config: dict[Configuration, list[_Node]] = {}
    closed_by_config: dict[Configuration, list[tuple[int, int | float]]] = {}
    h_of = make_heuristic(instance.goal_cell, instance.params)

    def push(node: _Node):
        cfg = node.config
        h = h_of(cfg.row, cfg.col)
        f = node.lower + h
        heappush(heap, (f, h, cfg.row, cfg.col, cfg.heading, cfg.velocity,
                        node.lower, -node.upper if node.upper != INF else -INF,
                        next(counter), node))
        open_by_config.setdefault(cfg, []).append(node)

    def admit(node: _Node) -> bool:
        """Duplicate policy; returns True when the node should enter OPEN."""
        cfg = node.config
        closed = closed_by_config.get(cfg, [])
        opened = open_by_config.get(cfg, [])
        if paper_exact_open:
            for lo, hi in closed:
                if (lo, hi) == (node.lower, node.upper):
                    return False
            for other in opened:
                if not other.stale and (other.lower, other.upper) == (node.lower, node.upper):
                    return False
            return True
        cand = (node.lower, node.upper)
        for closed_iv in closed:
            if dominates(closed_iv, cand):
                return False
        for other in opened:
            if not other.stale and dominates((other.lower, other.upper), cand):
                return False
        for other in opened:
            if not other.stale and dominates(cand, (other.lower, other.upper)):
                other.stale = True
        return True

    generations = 1
    expansions = 0
    push(root)

    while heap:
        entry = heappop(heap)
        node: _Node = entry[-1]
        if node.stale:
            continue
        node.stale = True
        expansions += 1
        cfg = node.config
        closed_by_config.setdefault(cfg, []).append((node.lower, node.upper))
        if outcome.trace is not None:
            outcome.trace.append((cfg, node.lower, node.upper))
        if instance.is_goal(cfg):
            outcome.status = STATUS_SOLVED
            outcome.trajectory = reconstruct_path(node, t_start)
            break

        for prim in instance.primitives.from_velocity(cfg.velocity):
            fp = instance.footprint(cfg, prim)
            if fp is None:
                continue
            arrivals = project_pairs(node.lower, node.upper, fp, prim.duration,
                                     table.safe_set)
            if not arrivals:
                continue
            succ_cfg = apply_primitive(cfg, prim)
            if succ_cfg.velocity == 0:
                arrivals = extend_wait_pairs(arrivals, table.safe_set(*succ_cfg.cell))
            for lo, hi in arrivals:
                generations += 1
                if generations > limits.max_generated:
                    outcome.status = STATUS_RESOURCE_LIMIT
                    outcome.expansions = expansions
                    outcome.generations = generations
                    outcome.runtime = time.perf_counter() - t0
                    return outcome
                succ = _Node(succ_cfg, lo, hi, parent=node, via=prim)
                if admit(succ):
                    push(succ)

    outcome.expansions = expansions
    outcome.generations = generations
    outcome.runtime = time.perf_counter() - t0
    return outcome
