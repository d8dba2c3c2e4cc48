import random
from fractions import Fraction

import pytest

from kinosipp.bench import generate_instance
from kinosipp.grid import GridMap
from kinosipp.instance import ProblemInstance
from kinosipp.intervals import INF
from kinosipp.kinodynamics import Configuration, PrimitiveParams, build_primitive_set
from kinosipp.planners import PLANNERS, SearchLimits, heuristic, run_planner
from kinosipp.planners.common import make_heuristic
from kinosipp.planners.sipp_ip import dominates
from kinosipp.validation import validate

from conftest import open_grid


LIMITS = SearchLimits(max_generated=2_000_000, horizon=600)
FIX_LIMITS = SearchLimits(max_generated=2_000_000)  # fixtures keep open-ended intervals


def small_instances(n, size=12, seed0=400, params=None):
    params = params or PrimitiveParams(Fraction(1), Fraction(1, 2), Fraction(1), 2)
    out = []
    for i in range(n):
        rng = random.Random(seed0 + i)
        rows = [[rng.random() >= 0.15 for _ in range(size)] for _ in range(size)]
        rows[0][0] = rows[size - 1][size - 1] = True
        grid = GridMap(rows)
        density = Fraction(rng.randint(1, 8), size * size)
        out.append(generate_instance(grid, params, density, seed=seed0 + i))
    return out


# --- heuristic -------------------------------------------------------------

def test_heuristic_examples(paper_params):
    cfg = Configuration(0, 0, 0, 0)
    assert heuristic(cfg, (0, 4), paper_params) == 20
    assert heuristic(Configuration(3, 7, 90, 0), (3, 7), paper_params) == 0
    assert heuristic(cfg, (0, 1), paper_params) == 5


def test_fast_heuristic_matches_reference(paper_params):
    h = make_heuristic((9, 13), paper_params)
    for row in range(0, 20, 3):
        for col in range(0, 20, 3):
            assert h(row, col) == heuristic(Configuration(row, col, 0, 0), (9, 13),
                                            paper_params)


def test_heuristic_is_admissible_on_straight_dashes(paper_params):
    grid = open_grid(1, 16)
    pset = build_primitive_set(paper_params)
    for goal_col in (8, 9, 10, 12):
        inst = ProblemInstance(grid=grid, params=paper_params, primitives=pset,
                               start=Configuration(0, 0, 0, 0), goal_cell=(0, goal_col),
                               events=())
        out = run_planner("astar", inst, SearchLimits(horizon=2000))
        assert out.solved
        assert out.cost >= heuristic(inst.start, inst.goal_cell, paper_params)


# --- delayed-departure regression fixture ----------------------------------

def test_interval_planner_solves_delayed_departure(delayed_departure_instance):
    out = run_planner("sipp-ip", delayed_departure_instance, FIX_LIMITS, debug=True)
    assert out.solved and out.cost == 7
    popped = {(cfg.cell, cfg.velocity, lo, hi) for cfg, lo, hi in out.trace}
    assert ((0, 1), 1, 2, 7) in popped
    assert ((0, 2), 1, 5, 8) in popped
    assert ((0, 3), 0, 7, INF) in popped
    names = [(s.primitive.name, s.start) for s in out.trajectory.steps]
    assert names == [("accelerate", 2), ("cruise", 4), ("decelerate", 5)]


def test_time_stepped_search_solves_delayed_departure(delayed_departure_instance):
    out = run_planner("astar", delayed_departure_instance, FIX_LIMITS)
    assert out.solved and out.cost == 7
    assert out.trajectory.steps[0].start == 2  # two waiting steps at the start


def test_baselines_fail_delayed_departure(delayed_departure_instance):
    for name in ("sipp", "sipp1", "sipp2"):
        out = run_planner(name, delayed_departure_instance, FIX_LIMITS)
        assert out.status == "no_solution", name


def test_reconstruction_inserts_leading_wait(delayed_departure_instance):
    out = run_planner("sipp-ip", delayed_departure_instance, FIX_LIMITS)
    traj = out.trajectory
    assert traj.steps[0].start == 2  # implicit wait of 2 at the start cell
    assert traj.cost == traj.steps[-1].start + traj.steps[-1].primitive.duration
    assert validate(traj, delayed_departure_instance).valid


# --- corridor fixture (classic invalid, sipp1 starved, sipp-ip clean) ------

def test_corridor_classic_plan_fails_validation(corridor_instance):
    out = run_planner("sipp", corridor_instance, FIX_LIMITS)
    assert out.solved
    report = validate(out.trajectory, corridor_instance)
    assert not report.valid
    assert "dynamic_collision" in report.kinds()


def test_corridor_sipp1_fails(corridor_instance):
    assert run_planner("sipp1", corridor_instance, FIX_LIMITS).status == "no_solution"


def test_corridor_interval_planner_clean(corridor_instance):
    out = run_planner("sipp-ip", corridor_instance, FIX_LIMITS)
    assert out.solved
    assert validate(out.trajectory, corridor_instance).valid
    astar = run_planner("astar", corridor_instance, FIX_LIMITS)
    assert astar.solved and astar.cost == out.cost


# --- generic behaviors ------------------------------------------------------

def test_start_equals_goal(small_params, small_primitives):
    grid = open_grid(3, 3)
    inst = ProblemInstance(grid=grid, params=small_params, primitives=small_primitives,
                           start=Configuration(1, 1, 0, 0), goal_cell=(1, 1), events=())
    for name in PLANNERS:
        out = run_planner(name, inst, LIMITS)
        assert out.solved and out.cost == 0 and out.trajectory.steps == (), name


def test_goal_permanently_unreachable(small_params, small_primitives):
    grid = GridMap([[True, False, True]])
    inst = ProblemInstance(grid=grid, params=small_params, primitives=small_primitives,
                           start=Configuration(0, 0, 0, 0), goal_cell=(0, 2), events=())
    for name in PLANNERS:
        assert run_planner(name, inst, LIMITS).status == "no_solution", name


def test_resource_limit_status(delayed_departure_instance):
    tight = SearchLimits(max_generated=2)
    out = run_planner("sipp-ip", delayed_departure_instance, tight)
    assert out.status == "resource_limit"
    out = run_planner("astar", delayed_departure_instance, tight)
    assert out.status == "resource_limit"


def test_obstacle_free_agreement_all_planners(small_params):
    grid = open_grid(6, 6)
    pset = build_primitive_set(small_params)
    inst = ProblemInstance(grid=grid, params=small_params, primitives=pset,
                           start=Configuration(0, 0, 0, 0), goal_cell=(5, 5), events=())
    outcomes = {name: run_planner(name, inst, LIMITS) for name in PLANNERS}
    costs = {name: out.cost for name, out in outcomes.items()}
    assert all(out.solved for out in outcomes.values())
    assert len(set(costs.values())) == 1, costs


def test_dominance_predicate():
    assert dominates((2, 7), (3, 7))
    assert not dominates((2, 7), (2, 9))
    assert dominates((2, INF), (2, 9))
    assert dominates((2, 7), (2, 7))


def test_dominance_pruning_never_changes_cost():
    for inst in small_instances(25, seed0=520):
        default = run_planner("sipp-ip", inst, LIMITS)
        literal = run_planner("sipp-ip", inst, LIMITS, paper_exact_open=True)
        assert (default.status, default.cost) == (literal.status, literal.cost)


def test_popped_f_values_non_decreasing(delayed_departure_instance):
    params = delayed_departure_instance.params
    goal = delayed_departure_instance.goal_cell
    out = run_planner("sipp-ip", delayed_departure_instance, FIX_LIMITS, debug=True)
    fs = [lo + heuristic(cfg, goal, params) for cfg, lo, hi in out.trace]
    assert fs == sorted(fs)
    out = run_planner("astar", delayed_departure_instance, FIX_LIMITS, debug=True)
    fs = [t + heuristic(cfg, goal, params) for cfg, t in out.trace]
    assert fs == sorted(fs)
    for name in ("sipp", "sipp1", "sipp2"):
        out = run_planner(name, delayed_departure_instance, FIX_LIMITS, debug=True)
        fs = [t + heuristic(cfg, goal, params) for cfg, _si, t in out.trace]
        assert fs == sorted(fs), name


def test_mutual_oracle_on_small_suite():
    for inst in small_instances(30, size=8, seed0=700):
        ip = run_planner("sipp-ip", inst, LIMITS)
        ts = run_planner("astar", inst, LIMITS)
        assert (ip.status, ip.cost) == (ts.status, ts.cost)
        if ip.solved:
            assert validate(ip.trajectory, inst).valid
            assert validate(ts.trajectory, inst).valid
            assert ip.expansions <= ts.expansions


def test_baseline_cost_dominance_and_superset():
    solved1 = solved2 = 0
    for inst in small_instances(40, seed0=820):
        ip = run_planner("sipp-ip", inst, LIMITS)
        s1 = run_planner("sipp1", inst, LIMITS)
        s2 = run_planner("sipp2", inst, LIMITS)
        if s1.solved:
            solved1 += 1
            assert ip.solved and s1.cost >= ip.cost
            assert validate(s1.trajectory, inst).valid
            assert s2.solved and s2.cost <= s1.cost  # re-expansion only helps
        if s2.solved:
            solved2 += 1
            assert ip.solved and s2.cost >= ip.cost
            assert validate(s2.trajectory, inst).valid
    assert solved2 >= solved1
    assert solved1 > 10  # the suite is not vacuous


def test_nonzero_start_velocity_singleton_interval(paper_params, paper_primitives):
    grid = open_grid(1, 16)
    inst = ProblemInstance(grid=grid, params=paper_params, primitives=paper_primitives,
                           start=Configuration(0, 0, 0, 2), goal_cell=(0, 9), events=())
    out = run_planner("sipp-ip", inst, SearchLimits(horizon=2000), debug=True)
    assert out.solved
    cfg0, lo0, hi0 = out.trace[0]
    assert (lo0, hi0) == (0, 0)  # no waiting available at cruise speed
    assert validate(out.trajectory, inst).valid
