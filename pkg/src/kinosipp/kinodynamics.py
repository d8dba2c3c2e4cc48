"""Configurations and the motion-primitive set (accelerate/cruise/decelerate/rotate).

Each kinetic primitive carries a swept-cell timetable: for every cell the
unit-disk agent touches while executing the motion, the relative first/last
touch steps [lb, ub].  Touch times come from the closed-form constant
acceleration position profile and are rounded outward (lb floored, ub ceiled)
using exact rational/surd arithmetic, so tables are bit-stable across runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .grid import GridMap
from .intervals import to_fraction

HEADINGS = (0, 90, 180, 270)

# heading -> unit forward vector in (row, col); 0 degrees faces +col (east),
# angles grow counterclockwise (90 faces -row).
_FORWARD = {0: (0, 1), 90: (-1, 0), 180: (0, -1), 270: (1, 0)}


def exact_num(x) -> int | Fraction:
    """Normalize a numeric to int when integral, else exact Fraction."""
    f = to_fraction(x)
    return int(f) if f.denominator == 1 else f


def _cmp_sqrt(m: Fraction, r: Fraction) -> int:
    """Sign of (m - sqrt(r)) for rational m and r >= 0, computed exactly."""
    if m < 0:
        return 0 if (m == 0 and r == 0) else -1
    m2 = m * m
    if m2 < r:
        return -1
    if m2 > r:
        return 1
    return 0


def floor_surd(p: Fraction, q: int, r: Fraction) -> int:
    """Exact floor of p + q*sqrt(r) with q in {-1, 0, 1} and r >= 0."""
    if q == 0 or r == 0:
        return math.floor(p)

    def le(n: int) -> bool:
        # n <= p + q*sqrt(r)
        if q > 0:
            return _cmp_sqrt(Fraction(n) - p, r) <= 0
        return _cmp_sqrt(p - Fraction(n), r) >= 0

    n = math.floor(float(p) + q * math.sqrt(float(r)))
    while not le(n):
        n -= 1
    while le(n + 1):
        n += 1
    return n


def ceil_surd(p: Fraction, q: int, r: Fraction) -> int:
    return -floor_surd(-p, -q, r)


class Configuration(NamedTuple):
    """Agent state: cell position, heading (degrees), exact velocity (cells/s)."""

    row: int
    col: int
    heading: int
    velocity: int | Fraction

    @property
    def cell(self) -> tuple[int, int]:
        return (self.row, self.col)

    def can_wait(self) -> bool:
        return self.velocity == 0


class SweptCell(NamedTuple):
    """Relative cell offset with its sweep window [lb, ub] in steps."""

    dr: int
    dc: int
    lb: int
    ub: int


@dataclass(frozen=True)
class MotionPrimitive:
    name: str
    source_velocity: int | Fraction
    target_velocity: int | Fraction
    heading_delta: int
    cell_displacement: tuple[int, int]
    duration: int
    swept_cells: tuple[SweptCell, ...]

    def __post_init__(self):
        if self.duration < 1:
            raise ValueError(f"{self.name}: duration must be a positive integer")
        if not self.swept_cells:
            raise ValueError(f"{self.name}: swept_cells must be non-empty")
        first, last = self.swept_cells[0], self.swept_cells[-1]
        if (first.dr, first.dc) != (0, 0) or first.lb != 0:
            raise ValueError(f"{self.name}: sweep must start at the source cell at lb=0")
        if (last.dr, last.dc) != self.cell_displacement:
            raise ValueError(f"{self.name}: sweep must end at the target cell")
        prev_lb = 0
        for sc in self.swept_cells:
            if not (0 <= sc.lb <= sc.ub <= self.duration):
                raise ValueError(f"{self.name}: sweep window {sc} outside [0, {self.duration}]")
            if sc.lb < prev_lb:
                raise ValueError(f"{self.name}: sweep lb values must be non-decreasing")
            prev_lb = sc.lb

    @property
    def kind(self) -> str:
        if self.target_velocity > self.source_velocity:
            return "accelerating"
        if self.target_velocity < self.source_velocity:
            return "decelerating"
        return "uniform"

    def is_rotation(self) -> bool:
        return self.heading_delta != 0


@dataclass(frozen=True)
class PrimitiveParams:
    """Physical parameters the primitive generator works from."""

    max_speed: Fraction          # cells/s
    acceleration: Fraction       # cells/s^2
    time_step: Fraction          # seconds per step
    rotation_duration: int       # steps for a 90-degree in-place turn
    wait_duration: int = 1       # steps; atomic wait for time-stepped search

    def __post_init__(self):
        object.__setattr__(self, "max_speed", to_fraction(self.max_speed))
        object.__setattr__(self, "acceleration", to_fraction(self.acceleration))
        object.__setattr__(self, "time_step", to_fraction(self.time_step))
        if self.max_speed <= 0 or self.acceleration <= 0 or self.time_step <= 0:
            raise ValueError("max_speed, acceleration and time_step must be positive")
        if self.rotation_duration < 1 or self.wait_duration < 1:
            raise ValueError("rotation_duration and wait_duration must be >= 1 steps")
        if self.ramp_cells_exact.denominator != 1:
            raise ValueError(
                f"acceleration ramp must end on a cell boundary, covers {self.ramp_cells_exact} cells")

    @property
    def ramp_cells_exact(self) -> Fraction:
        return self.max_speed * self.max_speed / (2 * self.acceleration)

    @property
    def ramp_cells(self) -> int:
        return int(self.ramp_cells_exact)

    @property
    def velocities(self) -> tuple[int | Fraction, ...]:
        return (0, exact_num(self.max_speed))


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _accel_touch_times(params: PrimitiveParams, d: int):
    """Raw touch windows (surd triples) for the acceleration ramp over cells 0..d.

    Times are in steps.  enter(i) solves x = i-1 on x(t) = a t^2 / 2; exit(i)
    solves x = i+1, clamped to the ramp end.  Each value is (p, q, r) meaning
    p + q*sqrt(r).
    """
    a, step = params.acceleration, params.time_step
    total = params.max_speed / (a * step)  # exact ramp duration in steps
    windows = []
    for i in range(d + 1):
        if i == 0:
            enter = (Fraction(0), 0, Fraction(0))
        else:
            enter = (Fraction(0), 1, Fraction(2 * (i - 1)) / (a * step * step))
        if i + 1 > d:
            exit_ = (total, 0, Fraction(0))
        else:
            exit_ = (Fraction(0), 1, Fraction(2 * (i + 1)) / (a * step * step))
        windows.append((enter, exit_))
    return windows, total


def _clamp_window(enter_lb: int, exit_ub: int, duration: int) -> tuple[int, int]:
    return max(0, enter_lb), min(duration, exit_ub)


def build_primitive_set(params: PrimitiveParams) -> "PrimitiveSet":
    """Synthesize accelerate, decelerate, cruise and both rotations.

    Waiting is not a primitive; planners realize it through interval extension
    (or atomic wait steps for the time-stepped baseline).
    """
    v = exact_num(params.max_speed)
    d = params.ramp_cells
    accel_dur = math.ceil(params.max_speed / (params.acceleration * params.time_step))
    cruise_dur = _round_half_up(1 / (params.max_speed * params.time_step))
    if cruise_dur < 1:
        raise ValueError("time step too coarse: cruise primitive rounds to zero steps")

    windows, total = _accel_touch_times(params, d)

    accel_cells = []
    for i, (enter, exit_) in enumerate(windows):
        lb = floor_surd(*enter)
        ub = ceil_surd(*exit_)
        lb, ub = _clamp_window(lb, ub, accel_dur)
        accel_cells.append(SweptCell(0, i, lb, ub))

    decel_cells = []
    for i in range(d + 1):
        enter_m, exit_m = windows[d - i]
        # time-mirror: decel enters cell i when the accel profile exits cell d-i
        lb = floor_surd(total - exit_m[0], -exit_m[1], exit_m[2])
        ub = ceil_surd(total - enter_m[0], -enter_m[1], enter_m[2])
        lb, ub = _clamp_window(lb, ub, accel_dur)
        decel_cells.append(SweptCell(0, i, lb, ub))

    cruise_real = 1 / (params.max_speed * params.time_step)
    cruise_cells = [
        SweptCell(0, 0, 0, min(cruise_dur, math.ceil(cruise_real))),
        SweptCell(0, 1, 0, cruise_dur),
    ]

    prims = [
        MotionPrimitive("accelerate", 0, v, 0, (0, d), accel_dur, tuple(accel_cells)),
        MotionPrimitive("cruise", v, v, 0, (0, 1), cruise_dur, tuple(cruise_cells)),
        MotionPrimitive("decelerate", v, 0, 0, (0, d), accel_dur, tuple(decel_cells)),
        MotionPrimitive("rotate_ccw", 0, 0, 90, (0, 0), params.rotation_duration,
                        (SweptCell(0, 0, 0, params.rotation_duration),)),
        MotionPrimitive("rotate_cw", 0, 0, -90, (0, 0), params.rotation_duration,
                        (SweptCell(0, 0, 0, params.rotation_duration),)),
    ]
    return PrimitiveSet(prims)


class PrimitiveSet:
    """Immutable collection of motion primitives, indexed by name and velocity."""

    def __init__(self, primitives: Sequence[MotionPrimitive]):
        self.primitives = tuple(primitives)
        self.by_name = {p.name: p for p in self.primitives}
        if len(self.by_name) != len(self.primitives):
            raise ValueError("duplicate primitive names")
        self._by_velocity: dict = {}
        for p in self.primitives:
            self._by_velocity.setdefault(p.source_velocity, []).append(p)

    def __iter__(self):
        return iter(self.primitives)

    def __len__(self):
        return len(self.primitives)

    @property
    def velocities(self):
        vs = {p.source_velocity for p in self.primitives}
        vs.update(p.target_velocity for p in self.primitives)
        return vs

    def max_duration(self) -> int:
        return max(p.duration for p in self.primitives)

    def from_velocity(self, velocity) -> list[MotionPrimitive]:
        return self._by_velocity.get(velocity, [])


def applicable_primitives(config: Configuration, pset: PrimitiveSet) -> list[MotionPrimitive]:
    """Primitives whose source velocity matches the configuration's.

    Rotations require zero velocity, which their source velocity already
    encodes.  Static obstacles are not consulted here.
    """
    return list(pset.from_velocity(config.velocity))


def rotate_offset(dr: int, dc: int, heading: int) -> tuple[int, int]:
    if heading == 0:
        return (dr, dc)
    if heading == 90:
        return (-dc, dr)
    if heading == 180:
        return (-dr, -dc)
    if heading == 270:
        return (dc, -dr)
    raise ValueError(f"heading must be one of {HEADINGS}, got {heading}")


def apply_primitive(config: Configuration, prim: MotionPrimitive) -> Configuration:
    dr, dc = rotate_offset(*prim.cell_displacement, config.heading)
    return Configuration(config.row + dr, config.col + dc,
                         (config.heading + prim.heading_delta) % 360,
                         prim.target_velocity)


def primitive_footprint(config: Configuration, prim: MotionPrimitive,
                        grid: GridMap) -> Optional[tuple[tuple[int, int, int, int], ...]]:
    """Absolute swept cells (row, col, lb, ub) for prim applied at config.

    Returns None when any swept cell is out of bounds or statically blocked
    (infeasible is a value, not an error).
    """
    out = []
    for sc in prim.swept_cells:
        dr, dc = rotate_offset(sc.dr, sc.dc, config.heading)
        row, col = config.row + dr, config.col + dc
        if not grid.is_traversable(row, col):
            return None
        out.append((row, col, sc.lb, sc.ub))
    return tuple(out)


# --- JSON wire form (fixture injection and dumps) ---------------------------

def _velocity_to_json(v):
    v = to_fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _velocity_from_json(v):
    return exact_num(v)


def primitive_set_to_json(pset: PrimitiveSet) -> dict:
    return {
        "format_version": "1",
        "primitives": [
            {
                "name": p.name,
                "source_velocity": _velocity_to_json(p.source_velocity),
                "target_velocity": _velocity_to_json(p.target_velocity),
                "heading_delta": p.heading_delta,
                "cell_displacement": list(p.cell_displacement),
                "duration": p.duration,
                "swept_cells": [[sc.dr, sc.dc, sc.lb, sc.ub] for sc in p.swept_cells],
            }
            for p in pset
        ],
    }


def primitive_set_from_json(doc: dict) -> PrimitiveSet:
    prims = []
    for entry in doc["primitives"]:
        prims.append(MotionPrimitive(
            name=entry["name"],
            source_velocity=_velocity_from_json(entry["source_velocity"]),
            target_velocity=_velocity_from_json(entry["target_velocity"]),
            heading_delta=int(entry["heading_delta"]),
            cell_displacement=tuple(entry["cell_displacement"]),
            duration=int(entry["duration"]),
            swept_cells=tuple(SweptCell(*sc) for sc in entry["swept_cells"]),
        ))
    return PrimitiveSet(prims)


def dump_primitive_set(pset: PrimitiveSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(primitive_set_to_json(pset), fh, indent=2)
        fh.write("\n")


def load_primitive_set(path) -> PrimitiveSet:
    with open(path, "r", encoding="utf-8") as fh:
        return primitive_set_from_json(json.load(fh))
