import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fractions import Fraction

from kinosipp.grid import GridMap, load_map
from kinosipp.instance import ProblemInstance, load_instance
from kinosipp.intervals import SafeIntervalSet, TimeInterval, make_event
from kinosipp.kinodynamics import (Configuration, PrimitiveParams, build_primitive_set)

ASSETS = os.path.join(os.path.dirname(__file__), "..", "assets")
FIXTURES = os.path.join(ASSETS, "fixtures")
MAPS = os.path.join(ASSETS, "maps")


def asset(*parts) -> str:
    return os.path.join(ASSETS, *parts)


@pytest.fixture(scope="session")
def paper_params():
    """Cruise 2 cells/s, 0.5 cells/s^2, 0.1 s steps, quarter turn in 2 s."""
    return PrimitiveParams(Fraction(2), Fraction(1, 2), Fraction(1, 10), 20)


@pytest.fixture(scope="session")
def small_params():
    """One-cell ramps: cruise 1 cell/s, 0.5 cells/s^2, 1 s steps."""
    return PrimitiveParams(Fraction(1), Fraction(1, 2), Fraction(1), 2)


@pytest.fixture(scope="session")
def paper_primitives(paper_params):
    return build_primitive_set(paper_params)


@pytest.fixture(scope="session")
def small_primitives(small_params):
    return build_primitive_set(small_params)


@pytest.fixture(scope="session")
def delayed_departure_instance():
    """Four-cell corridor where only a delayed dash reaches the goal."""
    return load_instance(os.path.join(FIXTURES, "delayed_departure.json"))


@pytest.fixture(scope="session")
def corridor_instance():
    """Ten-cell corridor with two timed obstacles (frozen search result)."""
    return load_instance(os.path.join(FIXTURES, "corridor_two_obstacles.json"))


@pytest.fixture(scope="session")
def empty_map():
    return load_map(os.path.join(MAPS, "empty-64-64.map"))


@pytest.fixture(scope="session")
def room_map():
    return load_map(os.path.join(MAPS, "room-64-64.map"))


def make_safe(*pairs) -> SafeIntervalSet:
    return SafeIntervalSet([TimeInterval(lo, hi) for lo, hi in pairs])


def open_grid(height: int, width: int) -> GridMap:
    return GridMap([[True] * width for _ in range(height)])
