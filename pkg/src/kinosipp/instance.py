"""Problem instances: map + primitives + agent endpoints + obstacle events.

The JSON wire format decouples obstacle generation from planning: moving
obstacles appear only as per-cell occupancy events, never as plans.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .grid import GridMap, load_map
from .intervals import OccupancyEvent, SafeTable, blocked_from_events, make_event, to_fraction
from .kinodynamics import (Configuration, MotionPrimitive, PrimitiveParams, PrimitiveSet,
                           apply_primitive, build_primitive_set, exact_num,
                           primitive_footprint, primitive_set_from_json,
                           primitive_set_to_json)

FORMAT_VERSION = "1"


@dataclass
class ProblemInstance:
    grid: GridMap
    params: PrimitiveParams
    primitives: PrimitiveSet
    start: Configuration
    goal_cell: tuple[int, int]
    events: tuple[OccupancyEvent, ...]
    seed: int = 0
    t_start: int = 0
    goal_heading: Optional[int] = None
    map_name: str = "map"
    map_path: Optional[str] = None
    _safe_tables: dict = field(default_factory=dict, repr=False)
    _footprints: dict = field(default_factory=dict, repr=False)
    _reachable: Optional[bool] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.grid.is_traversable(*self.start.cell):
            raise ValueError(f"start cell {self.start.cell} is not traversable")
        if not self.grid.is_traversable(*self.goal_cell):
            raise ValueError(f"goal cell {self.goal_cell} is not traversable")
        for ev in self.events:
            r, c = ev.cell
            if not (0 <= r < self.grid.height and 0 <= c < self.grid.width):
                raise ValueError(f"event references out-of-bounds cell {ev.cell}")

    def safe_table(self, horizon: Optional[int] = None) -> SafeTable:
        if horizon not in self._safe_tables:
            blocked = blocked_from_events(self.events, self.params.time_step)
            self._safe_tables[horizon] = SafeTable(self.grid, blocked, horizon)
        return self._safe_tables[horizon]

    def footprint(self, config: Configuration, prim: MotionPrimitive):
        key = (config.row, config.col, config.heading, prim.name)
        got = self._footprints.get(key, False)
        if got is False:
            got = primitive_footprint(config, prim, self.grid)
            self._footprints[key] = got
        return got

    def derived_horizon(self) -> int:
        """Step bound past which the world is static and any plan can finish.

        Beyond the last obstacle event a solution needs no timestamp past the
        static traversal bound over all configurations.
        """
        last = self.safe_table().last_blocked_step()
        configs = self.grid.count_traversable() * 4 * len(self.primitives.velocities)
        return max(last, 0) + configs * self.primitives.max_duration() + 1

    def is_goal(self, config: Configuration) -> bool:
        if config.cell != self.goal_cell or config.velocity != 0:
            return False
        return self.goal_heading is None or config.heading == self.goal_heading

    def goal_statically_reachable(self) -> bool:
        """Reachability of a goal configuration over the static primitive graph.

        Moving obstacles only remove options, so a False here is a sound
        no_solution for every planner.  Catches goals in pockets where no
        acceleration ramp fits, which plain cell connectivity misses.
        """
        if self._reachable is None:
            seen = {self.start}
            stack = [self.start]
            found = self.is_goal(self.start)
            while stack and not found:
                config = stack.pop()
                for prim in self.primitives.from_velocity(config.velocity):
                    if self.footprint(config, prim) is None:
                        continue
                    nxt = apply_primitive(config, prim)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
                        if self.is_goal(nxt):
                            found = True
                            break
            object.__setattr__(self, "_reachable", found)
        return self._reachable


def _num_to_json(x):
    f = to_fraction(x)
    if f.denominator == 1:
        return int(f)
    as_float = float(f)
    if Fraction(str(as_float)) == f:
        return as_float
    return f"{f.numerator}/{f.denominator}"


def params_to_json(params: PrimitiveParams) -> dict:
    return {
        "max_speed": _num_to_json(params.max_speed),
        "acceleration": _num_to_json(params.acceleration),
        "rotation_duration_steps": params.rotation_duration,
        "wait_duration_steps": params.wait_duration,
    }


def params_from_json(doc: dict, time_step) -> PrimitiveParams:
    return PrimitiveParams(
        max_speed=to_fraction(doc["max_speed"]),
        acceleration=to_fraction(doc["acceleration"]),
        time_step=to_fraction(time_step),
        rotation_duration=int(doc["rotation_duration_steps"]),
        wait_duration=int(doc.get("wait_duration_steps", 1)),
    )


def config_to_json(config: Configuration) -> dict:
    return {"row": config.row, "col": config.col, "heading": config.heading,
            "velocity": _num_to_json(config.velocity)}


def config_from_json(doc: dict) -> Configuration:
    return Configuration(int(doc["row"]), int(doc["col"]), int(doc["heading"]),
                         exact_num(doc["velocity"]))


def instance_to_json(instance: ProblemInstance, inline_primitives: bool = False) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "map_path": instance.map_path or instance.map_name,
        "time_step": _num_to_json(instance.params.time_step),
        "primitive_params": params_to_json(instance.params),
        "agent_start": config_to_json(instance.start),
        "goal_cell": list(instance.goal_cell),
        "events": [
            {"cell": list(ev.cell), "enter_s": _num_to_json(ev.enter),
             "leave_s": _num_to_json(ev.leave)}
            for ev in instance.events
        ],
        "seed": instance.seed,
    }
    if instance.goal_heading is not None:
        doc["goal_heading"] = instance.goal_heading
    if inline_primitives:
        doc["primitive_set"] = primitive_set_to_json(instance.primitives)
    return doc


def instance_from_json(doc: dict, base_dir: str = ".") -> ProblemInstance:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported instance format_version {doc.get('format_version')!r}")
    map_path = doc["map_path"]
    resolved = map_path if os.path.isabs(map_path) else os.path.join(base_dir, map_path)
    grid = load_map(resolved)
    params = params_from_json(doc["primitive_params"], doc["time_step"])
    if "primitive_set" in doc:
        primitives = primitive_set_from_json(doc["primitive_set"])
    else:
        primitives = build_primitive_set(params)
    events = tuple(make_event(tuple(e["cell"]), to_fraction(e["enter_s"]),
                              to_fraction(e["leave_s"]))
                   for e in doc["events"])
    return ProblemInstance(
        grid=grid,
        params=params,
        primitives=primitives,
        start=config_from_json(doc["agent_start"]),
        goal_cell=tuple(doc["goal_cell"]),
        events=events,
        seed=int(doc.get("seed", 0)),
        goal_heading=doc.get("goal_heading"),
        map_name=os.path.splitext(os.path.basename(map_path))[0],
        map_path=map_path,
    )


def save_instance(instance: ProblemInstance, path, inline_primitives: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(instance_to_json(instance, inline_primitives), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(path) -> ProblemInstance:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return instance_from_json(doc, base_dir=os.path.dirname(os.path.abspath(path)))
