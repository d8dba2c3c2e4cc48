"""Instance generation, experiment orchestration, metrics and reports.

Moving obstacles follow seeded shortest-ish walks between random free cells
at random speeds with random waits; only their per-cell touch episodes are
kept, so obstacle generation and planning stay decoupled.
"""

from __future__ import annotations

import csv
import math
import random
import statistics
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .grid import GridMap
from .instance import ProblemInstance
from .intervals import OccupancyEvent, to_fraction
from .kinodynamics import Configuration, PrimitiveParams, PrimitiveSet, build_primitive_set
from .planners import SearchLimits, run_planner, STATUS_SOLVED
from .validation import validate

DEFAULT_MO_SPEEDS = (1, 2)        # cells/s
DEFAULT_WAIT_PROB = 0.3
DEFAULT_MAX_WAIT_STEPS = 20
DEFAULT_GOAL_DWELL_STEPS = 20


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def obstacle_count(grid: GridMap, density) -> int:
    """Number of moving obstacles: round(density * free cells), half up."""
    return _round_half_up(to_fraction(density) * grid.count_traversable())


def _corner_cells(grid: GridMap) -> tuple[tuple[int, int], tuple[int, int]]:
    """First and last traversable cells in row-major order."""
    free = grid.free_cells()
    if not free:
        raise ValueError("map has no traversable cells")
    return free[0], free[-1]


def _random_walk(grid: GridMap, start, goal, rng: random.Random) -> list[tuple[int, int]]:
    """Shortest path from start to goal with seeded random tie-breaking."""
    dist = {goal: 0}
    queue = deque([goal])
    while queue:
        cell = queue.popleft()
        r, c = cell
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if grid.is_traversable(nr, nc) and (nr, nc) not in dist:
                dist[(nr, nc)] = dist[cell] + 1
                queue.append((nr, nc))
    if start not in dist:
        return [start]
    path = [start]
    cell = start
    while cell != goal:
        r, c = cell
        best = dist[cell] - 1
        options = [(nr, nc) for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
                   if dist.get((nr, nc), -1) == best]
        cell = rng.choice(options)
        path.append(cell)
    return path


def _walk_events(path: Sequence[tuple[int, int]], speed: Fraction, time_step: Fraction,
                 rng: random.Random, wait_prob: float, max_wait_steps: int,
                 dwell_steps: int) -> list[OccupancyEvent]:
    """Touch episodes of a unit-disk walker moving cell to cell at constant speed."""
    move = 1 / speed  # seconds per cell
    enters: dict[int, Fraction] = {0: Fraction(0)}
    leaves: dict[int, Fraction] = {}
    tau = Fraction(0)
    for j in range(1, len(path)):
        if rng.random() < wait_prob:
            tau += rng.randint(0, max_wait_steps) * time_step
        enters[j] = tau
        tau += move
        leaves[j - 1] = tau
    tau += rng.randint(0, dwell_steps) * time_step
    leaves[len(path) - 1] = tau
    return [OccupancyEvent(path[i], enters[i], leaves[i]) for i in range(len(path))]


def generate_instance(grid: GridMap, params: PrimitiveParams, density: Fraction,
                      seed: int, *, map_name: str = "map", map_path: Optional[str] = None,
                      primitives: Optional[PrimitiveSet] = None,
                      mo_speeds: Sequence = DEFAULT_MO_SPEEDS,
                      wait_prob: float = DEFAULT_WAIT_PROB,
                      max_wait_steps: int = DEFAULT_MAX_WAIT_STEPS) -> ProblemInstance:
    """Seeded random instance: round(density * free cells) moving obstacles.

    The agent runs corner to corner (first/last traversable cells row-major).
    (map, density, seed) fully determines the result.
    """
    rng = random.Random(seed)
    free = grid.free_cells()
    n_obstacles = obstacle_count(grid, density)
    start_cell, goal_cell = _corner_cells(grid)
    events: list[OccupancyEvent] = []
    for _ in range(n_obstacles):
        mo_start = rng.choice(free)
        mo_goal = rng.choice(free)
        speed = to_fraction(rng.choice(list(mo_speeds)))
        path = _random_walk(grid, mo_start, mo_goal, rng)
        events.extend(_walk_events(path, speed, params.time_step, rng,
                                   wait_prob, max_wait_steps, DEFAULT_GOAL_DWELL_STEPS))
    return ProblemInstance(
        grid=grid,
        params=params,
        primitives=primitives or build_primitive_set(params),
        start=Configuration(start_cell[0], start_cell[1], 0, 0),
        goal_cell=goal_cell,
        events=tuple(events),
        seed=seed,
        map_name=map_name,
        map_path=map_path,
    )


def make_room_map(size: int = 64, room: int = 8, door_width: int = 2,
                  seed: int = 7) -> GridMap:
    """Room-and-door topology: wall lines every `room` cells with seeded doors."""
    rng = random.Random(seed)
    blocked = [[False] * size for _ in range(size)]
    walls = [k for k in range(room - 1, size - 1, room)]
    for w in walls:
        for k in range(size):
            blocked[w][k] = True
            blocked[k][w] = True
    segments = [0] + [w + 1 for w in walls]
    for w in walls:
        for seg_start in segments:
            seg_end = min(seg_start + room - 1, size)
            span = range(seg_start, seg_end)
            if len(span) < door_width:
                continue
            at = rng.randrange(seg_start, seg_end - door_width + 1)
            for k in range(at, at + door_width):
                blocked[w][k] = False   # horizontal wall door
                blocked[k][w] = False   # vertical wall door
    return GridMap([[not blocked[r][c] for c in range(size)] for r in range(size)])


@dataclass
class RunRecord:
    planner: str
    map: str
    density: str
    seed: int
    status: str
    cost_steps: Optional[int]
    expansions: int
    generations: int
    runtime_ms: float


@dataclass
class SuiteResult:
    records: list[RunRecord] = field(default_factory=list)

    def by_planner(self, planner: str) -> list[RunRecord]:
        return [r for r in self.records if r.planner == planner]

    def buckets(self) -> list[tuple[str, str]]:
        return sorted({(r.map, r.density) for r in self.records})

    def success_rate(self, planner: str, map_name: Optional[str] = None,
                     density: Optional[str] = None) -> float:
        rows = [r for r in self.by_planner(planner)
                if (map_name is None or r.map == map_name)
                and (density is None or r.density == density)]
        if not rows:
            return 0.0
        return sum(r.status == STATUS_SOLVED for r in rows) / len(rows)

    def runtime_stats(self, planner: str) -> dict:
        times = [r.runtime_ms for r in self.by_planner(planner)]
        if not times:
            return {"mean_ms": 0.0, "median_ms": 0.0}
        return {"mean_ms": statistics.fmean(times), "median_ms": statistics.median(times)}

    def median_metric(self, planner: str, metric: str) -> float:
        rows = self.by_planner(planner)
        return statistics.median(getattr(r, metric) for r in rows) if rows else 0.0

    def cost_excess_fractions(self, baseline: str, reference: str = "sipp-ip",
                              thresholds: Sequence[float] = (0.0, 0.05, 0.5)) -> dict[float, float]:
        """Fraction of commonly solved runs where baseline cost exceeds the
        reference cost by more than each threshold ratio."""
        ref = {(r.map, r.density, r.seed): r.cost_steps for r in self.by_planner(reference)
               if r.status == STATUS_SOLVED}
        pairs = []
        for r in self.by_planner(baseline):
            key = (r.map, r.density, r.seed)
            if r.status == STATUS_SOLVED and key in ref:
                pairs.append((r.cost_steps, ref[key]))
        out = {}
        for thr in thresholds:
            if not pairs:
                out[thr] = 0.0
            else:
                out[thr] = sum(b > v * (1 + thr) for b, v in pairs) / len(pairs)
        return out

    def common_solved_pairs(self, baseline: str, reference: str = "sipp-ip"):
        ref = {(r.map, r.density, r.seed): r.cost_steps for r in self.by_planner(reference)
               if r.status == STATUS_SOLVED}
        return [(r.cost_steps, ref[(r.map, r.density, r.seed)])
                for r in self.by_planner(baseline)
                if r.status == STATUS_SOLVED and (r.map, r.density, r.seed) in ref]


def run_suite(maps: Sequence[tuple[str, GridMap]], densities: Sequence,
              instances_per_cell: int, planners: Sequence[str], limits: SearchLimits,
              params: PrimitiveParams, *, seed0: int = 1,
              validate_solutions: bool = True, **gen_kwargs) -> SuiteResult:
    """Run every planner on every generated instance under identical limits.

    Every solved trajectory is validated; a validator-rejected solved result
    aborts the suite naming the offending planner (correctness failure).
    """
    result = SuiteResult()
    idx = 0
    for map_name, grid in maps:
        for density in densities:
            density_str = str(to_fraction(density))
            for k in range(instances_per_cell):
                seed = seed0 * 1_000_003 + idx
                idx += 1
                instance = generate_instance(grid, params, to_fraction(density), seed,
                                             map_name=map_name, **gen_kwargs)
                # prewarm shared substrate so timings cover planner work only
                instance.safe_table(limits.horizon)
                instance.goal_statically_reachable()
                for planner in planners:
                    t0 = time.perf_counter()
                    outcome = run_planner(planner, instance, limits)
                    elapsed_ms = (time.perf_counter() - t0) * 1000.0
                    if outcome.solved and validate_solutions:
                        report = validate(outcome.trajectory, instance)
                        if not report.valid:
                            raise RuntimeError(
                                f"planner {planner!r} returned an invalid trajectory on "
                                f"{map_name} density {density_str} seed {seed}: "
                                f"{report.violations[:3]}")
                    result.records.append(RunRecord(
                        planner=planner, map=map_name, density=density_str, seed=seed,
                        status=outcome.status, cost_steps=outcome.cost,
                        expansions=outcome.expansions, generations=outcome.generations,
                        runtime_ms=elapsed_ms))
    result.records.sort(key=lambda r: (r.map, r.density, r.seed, r.planner))
    return result


CSV_COLUMNS = ["planner", "map", "density", "seed", "status", "cost_steps",
               "expansions", "generations", "runtime_ms"]


def write_csv(result: SuiteResult, destination) -> None:
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in result.records:
            writer.writerow([r.planner, r.map, r.density, r.seed, r.status,
                             "" if r.cost_steps is None else r.cost_steps,
                             r.expansions, r.generations, f"{r.runtime_ms:.3f}"])


def read_csv(path) -> SuiteResult:
    result = SuiteResult()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            result.records.append(RunRecord(
                planner=row["planner"], map=row["map"], density=row["density"],
                seed=int(row["seed"]), status=row["status"],
                cost_steps=int(row["cost_steps"]) if row["cost_steps"] else None,
                expansions=int(row["expansions"]), generations=int(row["generations"]),
                runtime_ms=float(row["runtime_ms"])))
    return result
