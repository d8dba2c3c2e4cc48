"""Planner registry: five planners over the shared instance substrate."""

from __future__ import annotations

from typing import Callable, Optional

from .common import (PlanOutcome, SearchLimits, STATUS_NO_SOLUTION, STATUS_RESOURCE_LIMIT,
                     STATUS_SOLVED, Trajectory, TrajectoryStep, heuristic, search_horizon)
from . import astar_ts, sipp_family, sipp_ip

PLANNERS: dict[str, Callable] = {
    "astar": astar_ts.find_path,
    "sipp": sipp_family.find_path_classic,
    "sipp1": sipp_family.find_path_sipp1,
    "sipp2": sipp_family.find_path_sipp2,
    "sipp-ip": sipp_ip.find_path,
}


def run_planner(name: str, instance, limits: Optional[SearchLimits] = None,
                **kwargs) -> PlanOutcome:
    try:
        fn = PLANNERS[name]
    except KeyError:
        raise ValueError(f"unknown planner {name!r}; choose from {sorted(PLANNERS)}")
    return fn(instance, limits, **kwargs)


__all__ = [
    "PLANNERS", "PlanOutcome", "SearchLimits", "STATUS_NO_SOLUTION",
    "STATUS_RESOURCE_LIMIT", "STATUS_SOLVED", "Trajectory", "TrajectoryStep",
    "heuristic", "run_planner", "search_horizon",
]
