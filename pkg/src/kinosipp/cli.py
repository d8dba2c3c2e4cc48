"""Command-line surface: gen, plan, bench, validate, project.

Exit codes: 0 solved/ok, 2 no solution, 3 resource limit, 4 invalid input.
The validate verb exits 0 for a clean trajectory and 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bench import generate_instance, run_suite, write_csv
from .grid import load_map
from .instance import (ProblemInstance, config_from_json, config_to_json, load_instance,
                       params_from_json, save_instance)
from .intervals import INF, SafeIntervalSet, TimeInterval, to_fraction
from .kinodynamics import PrimitiveParams
from .planners import SearchLimits, run_planner, STATUS_NO_SOLUTION, STATUS_RESOURCE_LIMIT
from .projection import project_intervals, project_naive
from .svgplots import emit_plots
from .validation import validate

EXIT_OK = 0
EXIT_NO_SOLUTION = 2
EXIT_RESOURCE_LIMIT = 3
EXIT_INVALID_INPUT = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kinosipp",
                                     description="kinodynamic safe-interval path planning")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--limit-generated", type=int, default=100_000_000)
    common.add_argument("--planner", default="sipp-ip",
                        choices=["astar", "sipp", "sipp1", "sipp2", "sipp-ip"])
    common.add_argument("--paper-exact-open", action="store_true",
                        help="literal duplicate skip on exactly equal intervals")
    common.add_argument("--out", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance", parents=[common])
    gen.add_argument("map", help="MovingAI .map file")
    gen.add_argument("--density", default="1/10", help="obstacles per free cell, e.g. 1/10")
    gen.add_argument("--max-speed", default="2")
    gen.add_argument("--acceleration", default="0.5")
    gen.add_argument("--time-step", default="0.1")
    gen.add_argument("--rotation-steps", type=int, default=20)

    plan = sub.add_parser("plan", help="plan on an instance file", parents=[common])
    plan.add_argument("instance")
    plan.add_argument("--trace", action="store_true", help="print popped-node trace")

    bench = sub.add_parser("bench", help="run a planner suite and emit CSV/plots", parents=[common])
    bench.add_argument("maps", nargs="+", help="MovingAI .map files")
    bench.add_argument("--densities", default="1/10", help="comma-separated, e.g. 1/10,1/5")
    bench.add_argument("--instances", type=int, default=5)
    bench.add_argument("--planners", default="astar,sipp1,sipp2,sipp-ip")
    bench.add_argument("--max-speed", default="2")
    bench.add_argument("--acceleration", default="0.5")
    bench.add_argument("--time-step", default="0.1")
    bench.add_argument("--rotation-steps", type=int, default=20)
    bench.add_argument("--plots", default=None, help="directory for SVG charts")

    val = sub.add_parser("validate", help="check a trajectory against an instance", parents=[common])
    val.add_argument("instance")
    val.add_argument("trajectory")

    proj = sub.add_parser("project", help="run both projection routes on a fixture", parents=[common])
    proj.add_argument("fixture")
    return parser


def _params_from_args(args) -> PrimitiveParams:
    return PrimitiveParams(
        max_speed=to_fraction(args.max_speed),
        acceleration=to_fraction(args.acceleration),
        time_step=to_fraction(args.time_step),
        rotation_duration=args.rotation_steps,
    )


def trajectory_to_json(trajectory) -> dict:
    return {
        "format_version": "1",
        "start": config_to_json(trajectory.start_config),
        "steps": [{"primitive": s.primitive.name, "start": s.start}
                  for s in trajectory.steps],
        "cost": trajectory.cost,
    }


def trajectory_from_json(doc: dict, instance: ProblemInstance):
    from .planners import Trajectory, TrajectoryStep
    steps = tuple(TrajectoryStep(instance.primitives.by_name[s["primitive"]],
                                 int(s["start"]))
                  for s in doc["steps"])
    return Trajectory(start_config=config_from_json(doc["start"]), steps=steps,
                      cost=int(doc["cost"]))


def _bound(value) -> int | float:
    if value in ("inf", None):
        return INF
    return int(value)


def _cmd_gen(args) -> int:
    grid = load_map(args.map)
    params = _params_from_args(args)
    instance = generate_instance(grid, params, to_fraction(args.density), args.seed,
                                 map_name=os.path.splitext(os.path.basename(args.map))[0],
                                 map_path=os.path.abspath(args.map))
    out = args.out or "instance.json"
    save_instance(instance, out)
    print(f"wrote {out}: {len(instance.events)} occupancy events")
    return EXIT_OK


def _cmd_plan(args) -> int:
    instance = load_instance(args.instance)
    limits = SearchLimits(max_generated=args.limit_generated)
    kwargs = {"debug": args.trace}
    if args.planner == "sipp-ip":
        kwargs["paper_exact_open"] = args.paper_exact_open
    outcome = run_planner(args.planner, instance, limits, **kwargs)
    print(f"status={outcome.status} cost={outcome.cost} "
          f"expansions={outcome.expansions} generations={outcome.generations} "
          f"runtime={outcome.runtime:.4f}s")
    if args.trace and outcome.trace:
        for entry in outcome.trace:
            print("  popped", entry)
    if outcome.solved:
        report = validate(outcome.trajectory, instance)
        if not report.valid:
            print(f"warning: trajectory fails validation: {report.violations[:5]}")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(trajectory_to_json(outcome.trajectory), fh, indent=2)
                fh.write("\n")
            print(f"wrote {args.out}")
        return EXIT_OK
    if outcome.status == STATUS_RESOURCE_LIMIT:
        return EXIT_RESOURCE_LIMIT
    return EXIT_NO_SOLUTION


def _cmd_bench(args) -> int:
    maps = [(os.path.splitext(os.path.basename(m))[0], load_map(m)) for m in args.maps]
    densities = [to_fraction(d) for d in args.densities.split(",")]
    planners = args.planners.split(",")
    params = _params_from_args(args)
    limits = SearchLimits(max_generated=args.limit_generated)
    result = run_suite(maps, densities, args.instances, planners, limits, params,
                       seed0=args.seed)
    out = args.out or "bench.csv"
    write_csv(result, out)
    print(f"wrote {out}: {len(result.records)} records")
    for planner in planners:
        stats = result.runtime_stats(planner)
        print(f"  {planner:8s} SR={result.success_rate(planner):.3f} "
              f"mean={stats['mean_ms']:.1f}ms median={stats['median_ms']:.1f}ms")
    if args.plots:
        for path in emit_plots(result, args.plots):
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    instance = load_instance(args.instance)
    with open(args.trajectory, "r", encoding="utf-8") as fh:
        trajectory = trajectory_from_json(json.load(fh), instance)
    report = validate(trajectory, instance)
    if report.valid:
        print("valid")
        return EXIT_OK
    for v in report.violations:
        print(f"violation kind={v.kind} time={v.time} cell={v.cell}")
    return 1


def _cmd_project(args) -> int:
    with open(args.fixture, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    interval = TimeInterval(int(doc["interval"][0]), _bound(doc["interval"][1]))
    footprint = [tuple(c) for c in doc["cells"]]
    duration = int(doc["duration"])
    tables = {tuple(entry["cell"]): SafeIntervalSet(
        [TimeInterval(int(lo), _bound(hi)) for lo, hi in entry["intervals"]])
        for entry in doc["safe"]}

    def lookup(r, c):
        return tables[(r, c)]

    fast = project_intervals(interval, footprint, duration, lookup)
    print("sequential:", [iv.as_pair() for iv in fast])
    horizon = int(doc.get("horizon", 10_000))
    clipped = TimeInterval(interval.lower, min(interval.upper, horizon))
    naive = project_naive(clipped, footprint, duration, lookup)
    print("naive     :", [iv.as_pair() for iv in naive])
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"gen": _cmd_gen, "plan": _cmd_plan, "bench": _cmd_bench,
                "validate": _cmd_validate, "project": _cmd_project}
    try:
        return handlers[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
