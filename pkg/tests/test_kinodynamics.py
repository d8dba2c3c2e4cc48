import math
import random
from fractions import Fraction

import pytest

from kinosipp.kinodynamics import (Configuration, MotionPrimitive, PrimitiveParams,
                                   SweptCell, applicable_primitives, apply_primitive,
                                   build_primitive_set, ceil_surd, floor_surd,
                                   primitive_footprint, primitive_set_from_json,
                                   primitive_set_to_json, rotate_offset)

from conftest import open_grid


def test_surd_rounding_exact_on_perfect_squares():
    # sqrt(400) = 20 exactly; floats must not push ceil to 21
    assert floor_surd(Fraction(0), 1, Fraction(400)) == 20
    assert ceil_surd(Fraction(0), 1, Fraction(400)) == 20
    assert floor_surd(Fraction(0), 1, Fraction(800)) == 28
    assert ceil_surd(Fraction(0), 1, Fraction(800)) == 29
    assert floor_surd(Fraction(40), -1, Fraction(400)) == 20
    assert ceil_surd(Fraction(40), -1, Fraction(800)) == 12


def test_surd_rounding_matches_float_reference():
    rng = random.Random(3)
    for _ in range(500):
        p = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        q = rng.choice([-1, 0, 1])
        r = Fraction(rng.randint(0, 2000), rng.randint(1, 9))
        value = float(p) + q * math.sqrt(float(r))
        assert abs(floor_surd(p, q, r) - math.floor(value)) <= 1
        got = floor_surd(p, q, r)
        assert got <= float(p) + q * math.sqrt(float(r)) + 1e-6


def test_acceleration_ramp_covers_four_cells_in_forty_steps(paper_primitives):
    accel = paper_primitives.by_name["accelerate"]
    assert accel.cell_displacement == (0, 4)
    assert accel.duration == 40
    assert accel.kind == "accelerating"


def test_cruise_is_one_cell_five_steps(paper_primitives):
    cruise = paper_primitives.by_name["cruise"]
    assert cruise.cell_displacement == (0, 1)
    assert cruise.duration == 5
    assert cruise.kind == "uniform"


def test_rotation_duration_twenty_steps(paper_primitives):
    rot = paper_primitives.by_name["rotate_ccw"]
    assert rot.duration == 20
    assert rot.swept_cells == (SweptCell(0, 0, 0, 20),)


def test_applicable_gating(paper_primitives):
    at_cruise = applicable_primitives(Configuration(0, 0, 0, 2), paper_primitives)
    assert {p.name for p in at_cruise} == {"cruise", "decelerate"}
    at_rest = applicable_primitives(Configuration(0, 0, 0, 0), paper_primitives)
    assert {p.name for p in at_rest} == {"accelerate", "rotate_ccw", "rotate_cw"}
    assert applicable_primitives(Configuration(0, 0, 0, 7), paper_primitives) == []


def test_ramp_must_end_on_cell_boundary():
    with pytest.raises(ValueError):
        PrimitiveParams(Fraction(1), Fraction(2, 5), Fraction(1, 10), 20)  # 1.25 cells
    with pytest.raises(ValueError):
        PrimitiveParams(Fraction(0), Fraction(1, 2), Fraction(1, 10), 20)


def test_sweep_tables_cover_duration_without_gaps(paper_primitives, small_primitives):
    for pset in (paper_primitives, small_primitives):
        for prim in pset:
            spans = sorted((sc.lb, sc.ub) for sc in prim.swept_cells)
            assert spans[0][0] == 0
            reach = 0
            for lb, ub in spans:
                assert lb <= reach  # no gap: the agent is always somewhere
                reach = max(reach, ub)
            assert reach == prim.duration


def test_decelerate_mirrors_accelerate_within_one_step(paper_primitives):
    accel = paper_primitives.by_name["accelerate"]
    decel = paper_primitives.by_name["decelerate"]
    assert decel.duration == accel.duration
    d = accel.duration
    mirrored = [(sc.dc, d - sc.ub, d - sc.lb) for sc in reversed(accel.swept_cells)]
    mirrored = [(len(accel.swept_cells) - 1 - dc, lb, ub) for dc, lb, ub in mirrored]
    for (dc_m, lb_m, ub_m), sc in zip(mirrored, decel.swept_cells):
        assert dc_m == sc.dc
        assert abs(lb_m - sc.lb) <= 1
        assert abs(ub_m - sc.ub) <= 1


def test_accelerate_sweep_against_continuous_simulation(paper_params, paper_primitives):
    """Cross-check lb/ub against a fine-grained simulation of the disk motion."""
    accel = paper_primitives.by_name["accelerate"]
    a = float(paper_params.acceleration)
    step_s = float(paper_params.time_step)
    total_s = float(paper_params.max_speed) / a
    dt = 0.01
    touched = {}
    t = 0.0
    while t <= total_s + 1e-9:
        x = 0.5 * a * t * t
        for i in range(accel.cell_displacement[1] + 1):
            if abs(x - i) < 1.0 - 1e-9:
                lo, hi = touched.get(i, (t, t))
                touched[i] = (min(lo, t), max(hi, t))
        t += dt
    for sc in accel.swept_cells:
        enter_s, exit_s = touched[sc.dc]
        assert sc.lb <= enter_s / step_s + 0.2
        assert sc.lb >= enter_s / step_s - 1.2
        assert sc.ub >= exit_s / step_s - 0.2
        assert sc.ub <= exit_s / step_s + 1.2


def test_footprint_translation_east(paper_primitives):
    grid = open_grid(12, 12)
    accel = paper_primitives.by_name["accelerate"]
    fp = primitive_footprint(Configuration(5, 5, 0, 0), accel, grid)
    assert [cell[:2] for cell in fp] == [(5, 5), (5, 6), (5, 7), (5, 8), (5, 9)]
    assert [(lb, ub) for _, _, lb, ub in fp] == [(sc.lb, sc.ub) for sc in accel.swept_cells]


def test_footprint_infeasible_off_map(paper_primitives):
    grid = open_grid(12, 12)
    accel = paper_primitives.by_name["accelerate"]
    assert primitive_footprint(Configuration(5, 10, 0, 0), accel, grid) is None
    assert primitive_footprint(Configuration(5, 5, 90, 0), accel, grid) is not None
    assert primitive_footprint(Configuration(2, 5, 90, 0), accel, grid) is None


def test_rotation_footprint_single_cell(paper_primitives):
    grid = open_grid(3, 3)
    rot = paper_primitives.by_name["rotate_cw"]
    fp = primitive_footprint(Configuration(1, 1, 180, 0), rot, grid)
    assert fp == ((1, 1, 0, 20),)


def test_heading_rotation_is_a_group_action(paper_primitives):
    grid = open_grid(30, 30)
    cfg = Configuration(15, 15, 0, 0)
    accel = paper_primitives.by_name["accelerate"]
    offsets = [(r - 15, c - 15) for r, c, _, _ in primitive_footprint(cfg, accel, grid)]
    rotated = offsets
    for _ in range(4):
        rotated = [rotate_offset(dr, dc, 90) for dr, dc in rotated]
    assert rotated == offsets


def test_apply_primitive_headings(paper_primitives):
    accel = paper_primitives.by_name["accelerate"]
    assert apply_primitive(Configuration(5, 5, 0, 0), accel).cell == (5, 9)
    assert apply_primitive(Configuration(5, 5, 90, 0), accel).cell == (1, 5)
    assert apply_primitive(Configuration(5, 5, 180, 0), accel).cell == (5, 1)
    assert apply_primitive(Configuration(5, 5, 270, 0), accel).cell == (9, 5)
    rot = paper_primitives.by_name["rotate_ccw"]
    out = apply_primitive(Configuration(5, 5, 270, 0), rot)
    assert (out.cell, out.heading) == ((5, 5), 0)


def test_primitive_set_json_roundtrip(paper_primitives):
    doc = primitive_set_to_json(paper_primitives)
    again = primitive_set_from_json(doc)
    assert [p.name for p in again] == [p.name for p in paper_primitives]
    for a, b in zip(again, paper_primitives):
        assert a == b


def test_point_sweep_fixture_loadable():
    doc = {"format_version": "1", "primitives": [{
        "name": "hop", "source_velocity": 0, "target_velocity": 1,
        "heading_delta": 0, "cell_displacement": [0, 1], "duration": 2,
        "swept_cells": [[0, 0, 0, 0], [0, 1, 2, 2]],
    }]}
    pset = primitive_set_from_json(doc)
    assert pset.by_name["hop"].swept_cells == (SweptCell(0, 0, 0, 0), SweptCell(0, 1, 2, 2))


def test_invariant_violations_rejected():
    with pytest.raises(ValueError):
        MotionPrimitive("bad", 0, 1, 0, (0, 1), 2,
                        (SweptCell(0, 0, 1, 2), SweptCell(0, 1, 0, 2)))
    with pytest.raises(ValueError):
        MotionPrimitive("bad", 0, 1, 0, (0, 1), 2,
                        (SweptCell(0, 0, 0, 3), SweptCell(0, 1, 0, 2)))
    with pytest.raises(ValueError):
        MotionPrimitive("bad", 0, 1, 0, (0, 1), 0, (SweptCell(0, 0, 0, 0),))
