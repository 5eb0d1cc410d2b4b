import numpy as np
import pytest

from city.city_map import CityMap
from city.geometry import BoxObstacle, Vec3
from city.scenario import ScenarioSpec
from evaluation.constraints import ConstraintSet


def box(x0, y0, z0, x1, y1, z1) -> BoxObstacle:
    return BoxObstacle(Vec3(x0, y0, z0), Vec3(x1, y1, z1))


@pytest.fixture
def empty_city():
    return CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50))


@pytest.fixture
def wall_city():
    """100 x 100 x 50 map with one wall across x = 40..60 leaving a gap above z = 30."""
    return CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (box(40, 0, 0, 60, 100, 30),))


@pytest.fixture
def small_scenario():
    return ScenarioSpec(
        scenario_id=2,
        map_size=(300.0, 300.0),
        obstacle_density=0.10,
        max_building_height=100.0,
        start=Vec3(80.0, 150.0, 25.0),
        goal=Vec3(220.0, 150.0, 25.0),
        max_range=200.0,
        max_altitude_delta=30.0,
        seed=11,
    )


@pytest.fixture
def scenario_document():
    return {
        "scenario_id": 4,
        "map_size": [1000, 1000],
        "obstacle_density": 0.1,
        "max_building_height": 100,
        "start": [420, 500, 25],
        "goal": [580, 500, 25],
        "max_range": 200,
        "max_altitude_delta": 30,
        "seed": 42,
    }


@pytest.fixture
def constraints():
    return ConstraintSet()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
