"""Shared planner plumbing: limits, outcomes, trajectories, the heuristic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from ..instance import ProblemInstance
from ..kinodynamics import Configuration, MotionPrimitive, PrimitiveParams

STATUS_SOLVED = "solved"
STATUS_NO_SOLUTION = "no_solution"
STATUS_RESOURCE_LIMIT = "resource_limit"


@dataclass(frozen=True)
class SearchLimits:
    max_generated: int = 100_000_000
    horizon: Optional[int] = None  # override; None derives from the instance


class TrajectoryStep(NamedTuple):
    primitive: MotionPrimitive
    start: int


@dataclass(frozen=True)
class Trajectory:
    """Sequence of (primitive, start step); waits are the gaps between steps."""

    start_config: Configuration
    steps: tuple[TrajectoryStep, ...]
    cost: int

    def arrival_time(self, t_start: int = 0) -> int:
        if not self.steps:
            return t_start
        last = self.steps[-1]
        return last.start + last.primitive.duration


@dataclass
class PlanOutcome:
    status: str
    trajectory: Optional[Trajectory] = None
    expansions: int = 0
    generations: int = 0
    runtime: float = 0.0
    trace: Optional[list] = None

    @property
    def solved(self) -> bool:
        return self.status == STATUS_SOLVED

    @property
    def cost(self) -> Optional[int]:
        return self.trajectory.cost if self.trajectory else None


def heuristic(config: Configuration, goal_cell: tuple[int, int],
              params: PrimitiveParams) -> int:
    """Manhattan distance over the cruise speed, floored to whole steps.

    Admissible and consistent for axis-aligned motion under a speed cap.
    """
    dist = abs(config.row - goal_cell[0]) + abs(config.col - goal_cell[1])
    cells_per_step = params.max_speed * params.time_step
    return math.floor(dist / cells_per_step)


def make_heuristic(goal_cell: tuple[int, int], params: PrimitiveParams):
    """Integer-arithmetic closure equivalent to heuristic(); hot-loop form."""
    cells_per_step = params.max_speed * params.time_step
    num, den = cells_per_step.numerator, cells_per_step.denominator
    gr, gc = goal_cell

    def h(row: int, col: int) -> int:
        return (abs(row - gr) + abs(col - gc)) * den // num

    return h


def search_horizon(instance: ProblemInstance, limits: SearchLimits) -> int:
    return limits.horizon if limits.horizon is not None else instance.derived_horizon()
