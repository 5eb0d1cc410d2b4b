import dataclasses

import numpy as np
import pytest

from city.city_map import CityMap, is_point_free
from city.errors import DensityUnreachableError
from city.generator import GeneratorConfig, coverage_density, generate_city
from city.geometry import BoxObstacle, Vec3
from city.scenario import ScenarioSpec


def spec(size=1000.0, density=0.10, seed=42, start=None, goal=None):
    c = size / 2.0
    return ScenarioSpec(
        scenario_id=1,
        map_size=(size, size),
        obstacle_density=density,
        max_building_height=100.0,
        start=start or Vec3(c - 80.0, c, 25.0),
        goal=goal or Vec3(c + 80.0, c, 25.0),
        max_range=200.0,
        max_altitude_delta=30.0,
        seed=seed,
    )


def raster_coverage(city: CityMap, cell: float) -> float:
    w = city.bounds_max.x - city.bounds_min.x
    d = city.bounds_max.y - city.bounds_min.y
    xs = (np.arange(int(round(w / cell))) + 0.5) * cell
    ys = (np.arange(int(round(d / cell))) + 0.5) * cell
    covered = np.zeros((ys.size, xs.size), dtype=bool)
    for b in city.obstacles:
        mx = (xs >= b.min_corner.x) & (xs <= b.max_corner.x)
        my = (ys >= b.min_corner.y) & (ys <= b.max_corner.y)
        covered |= my[:, None] & mx[None, :]
    return float(covered.mean())


def test_sparse_city_meets_target_density():
    city = generate_city(spec(density=0.10, seed=42))
    assert 0.08 <= coverage_density(city) <= 0.12
    assert is_point_free(city, spec().start)
    assert is_point_free(city, spec().goal)


def test_zero_density_has_no_buildings():
    city = generate_city(spec(density=0.0))
    assert city.obstacles == ()
    assert coverage_density(city) == 0.0


def test_dense_small_city_matches_raster_count():
    s = spec(size=200.0, density=0.60, seed=7, start=Vec3(20, 100, 99), goal=Vec3(180, 100, 99))
    city = generate_city(s)
    coverage = coverage_density(city)
    assert abs(coverage - 0.60) <= 0.02
    assert abs(coverage - raster_coverage(city, 0.5)) <= 0.02


def test_generation_is_deterministic():
    assert generate_city(spec(seed=3)).obstacles == generate_city(spec(seed=3)).obstacles
    assert generate_city(spec(seed=3)).obstacles != generate_city(spec(seed=4)).obstacles


def test_buildings_stay_inside_the_flight_volume():
    city = generate_city(spec(seed=5))
    for b in city.obstacles:
        assert b.min_corner.z == 0.0
        assert b.max_corner.z <= 100.0
        assert 20 <= b.max_corner.x - b.min_corner.x <= 80


def test_unreachable_density_raises():
    with pytest.raises(DensityUnreachableError) as err:
        generate_city(spec(size=300.0, density=1.0, start=Vec3(50, 150, 25), goal=Vec3(250, 150, 25)),
                      GeneratorConfig(max_attempts=5))
    assert err.value.target == 1.0
    assert err.value.reached < 0.99


def test_generator_margin_reaches_the_map():
    city = generate_city(spec(seed=9), GeneratorConfig(safety_margin=2.0))
    assert city.safety_margin == 2.0


@pytest.mark.parametrize("field, value", [
    ("footprint_side_range", (0, 10)),
    ("height_range", (50.0, 10.0)),
    ("coverage_tolerance", 0.6),
    ("max_attempts", 0),
])
def test_generator_config_rejects_bad_values(field, value):
    with pytest.raises(ValueError):
        dataclasses.replace(GeneratorConfig(), **{field: value})


def test_coverage_of_half_map_box():
    city = CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (BoxObstacle(Vec3(0, 0, 0), Vec3(50, 100, 10)),))
    assert coverage_density(city) == pytest.approx(0.5)


def test_coverage_of_overlapping_boxes_matches_raster(rng):
    boxes = []
    for _ in range(20):
        x0, y0 = rng.integers(0, 80, size=2)
        w, d = rng.integers(1, 20, size=2)
        boxes.append(BoxObstacle(Vec3(x0, y0, 0), Vec3(x0 + w, y0 + d, 10)))
    city = CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), tuple(boxes))
    assert coverage_density(city) == pytest.approx(raster_coverage(city, 0.25), abs=0.005)
