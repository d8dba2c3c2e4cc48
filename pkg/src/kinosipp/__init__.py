"""Kinodynamic safe-interval path planning toolkit.

Grid maps with moving obstacles, motion primitives with swept-cell
timetables, interval projection, five planners (time-stepped best-first
search, classic SIPP, two kinodynamic SIPP retrofits, and the complete
interval-projection planner SIPP-IP), an independent trajectory validator,
and a benchmark harness.
"""

from .grid import GridMap, MapParseError, load_map, parse_movingai, to_movingai
from .intervals import (INF, OccupancyEvent, SafeIntervalSet, SafeTable, TimeInterval,
                        blocked_from_events, invert_to_safe, make_event)
from .kinodynamics import (Configuration, MotionPrimitive, PrimitiveParams, PrimitiveSet,
                           applicable_primitives, apply_primitive, build_primitive_set,
                           primitive_footprint)
from .projection import extend_wait, project_intervals, project_naive
from .instance import ProblemInstance, load_instance, save_instance
from .planners import (PLANNERS, PlanOutcome, SearchLimits, Trajectory, TrajectoryStep,
                       heuristic, run_planner)
from .validation import ValidationReport, validate

__version__ = "0.1.0"
