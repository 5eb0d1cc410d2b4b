import dataclasses
import math
import time

import numpy as np
import pytest

from city.city_map import CityMap
from city.geometry import BoxObstacle, Vec3
from evaluation import (
    ConstraintSet,
    DegenerateSegmentError,
    MetricsRecord,
    Violation,
    interior_angle,
    min_clearance,
    path_length,
    timed,
    turning_angles,
    validate,
)
from planners.common import Path


def path_of(*points):
    return Path(tuple(Vec3(*p) for p in points))


def rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def open_city():
    return CityMap(Vec3(0, 0, 0), Vec3(300, 300, 50))


@pytest.fixture
def block_city():
    return CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (BoxObstacle(Vec3(40, 40, 0), Vec3(60, 60, 30)),))


@pytest.mark.parametrize("points, expected", [
    ([(0, 0, 0)], 0.0),
    ([(0, 0, 0), (3, 4, 0)], 5.0),
    ([(0, 0, 0), (3, 4, 0), (3, 4, 12)], 17.0),
    ([(1, 1, 1), (2, 2, 2)], math.sqrt(3.0)),
])
def test_path_length(points, expected):
    assert path_length(path_of(*points)) == pytest.approx(expected)


def random_paths(count=1000):
    for seed in range(count):
        gen = np.random.default_rng(seed)
        yield gen.uniform(0, 100, size=(int(gen.integers(2, 21)), 3))


def test_path_length_matches_numpy():
    for pts in random_paths():
        expected = float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())
        assert path_length(Path.from_array(pts)) == pytest.approx(expected, rel=1e-12)


def test_collinear_path_has_no_turning():
    total, per_vertex = turning_angles(path_of((0, 0, 0), (1, 1, 1), (2, 2, 2), (5, 5, 5)))
    assert total == pytest.approx(0.0, abs=1e-7)
    assert len(per_vertex) == 2


def test_right_angle_turn():
    total, per_vertex = turning_angles(path_of((0, 0, 0), (10, 0, 0), (10, 10, 0)))
    assert total == pytest.approx(math.pi / 2)
    assert per_vertex == [pytest.approx(math.pi / 2)]


def test_turning_matches_numpy():
    for pts in random_paths():
        a, b = np.diff(pts, axis=0)[:-1], np.diff(pts, axis=0)[1:]
        cos = (a * b).sum(axis=1) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        expected = float(np.arccos(np.clip(cos, -1, 1)).sum())
        assert turning_angles(Path.from_array(pts))[0] == pytest.approx(expected, rel=1e-9, abs=1e-6)


def test_scores_are_rotation_invariant(rng):
    pts = rng.uniform(0, 100, size=(8, 3))
    turned = pts @ rotation(rng).T + [5.0, -3.0, 7.0]
    assert path_length(Path.from_array(turned)) == pytest.approx(path_length(Path.from_array(pts)), rel=1e-9)
    assert turning_angles(Path.from_array(turned))[0] == pytest.approx(
        turning_angles(Path.from_array(pts))[0], abs=1e-7)


def test_interior_angles():
    straight = path_of((0, 0, 0), (1, 0, 0), (2, 0, 0))
    assert interior_angle(straight, 1) == pytest.approx(180.0)
    reversal = [Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 0)]
    assert interior_angle(reversal, 1) == pytest.approx(0.0)


@pytest.mark.parametrize("deflection_deg, sharp", [(149.0, False), (151.0, True)])
def test_sharp_turn_threshold(open_city, deflection_deg, sharp):
    d = math.radians(deflection_deg)
    path = path_of((100, 150, 25), (150, 150, 25), (150 + 20 * math.cos(d), 150 + 20 * math.sin(d), 25))
    assert interior_angle(path, 1) == pytest.approx(180.0 - deflection_deg)
    record = validate(path, open_city, ConstraintSet())
    assert (Violation.SHARP_TURN in record.violations) is sharp


def test_interior_angle_index_errors():
    path = path_of((0, 0, 0), (1, 0, 0), (2, 1, 0))
    for index in (0, 2, 5):
        with pytest.raises(IndexError):
            interior_angle(path, index)


def test_coincident_waypoints_are_degenerate():
    with pytest.raises(DegenerateSegmentError):
        turning_angles([Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)])


def test_short_clear_path_is_feasible(open_city):
    path = path_of((75, 150, 25), (225, 150, 25))
    record = validate(path, open_city, ConstraintSet())
    assert record.feasible
    assert record.path_length == pytest.approx(150.0)
    assert math.isinf(record.min_clearance)
    assert record.waypoint_count == 2


def test_long_path_exceeds_range(open_city):
    record = validate(path_of((25, 150, 25), (275, 150, 25)), open_city, ConstraintSet())
    assert record.violations == [Violation.RANGE_EXCEEDED]


def test_grazing_path_breaks_clearance(block_city):
    path = path_of((10, 39.5, 10), (90, 39.5, 10))
    record = validate(path, block_city, ConstraintSet())
    assert Violation.CLEARANCE in record.violations
    assert record.min_clearance == pytest.approx(0.5)

    xs = np.linspace(10, 90, 8001)
    dy = np.maximum(40 - 39.5, 0.0)
    dx = np.maximum(np.maximum(40 - xs, 0.0), xs - 60)
    assert record.min_clearance == pytest.approx(float(np.hypot(dx, dy).min()), abs=1e-6)


def test_min_clearance_of_single_waypoint(block_city):
    assert min_clearance(path_of((65, 50, 10)), block_city) == pytest.approx(5.0)


def test_altitude_change_is_flagged(open_city):
    record = validate(path_of((100, 150, 5), (150, 150, 45)), open_city, ConstraintSet())
    assert record.violations == [Violation.ALTITUDE_DELTA]
    assert record.altitude_span == pytest.approx(40.0)


def test_validate_does_not_touch_its_inputs(block_city):
    path = path_of((10, 10, 40), (50, 50, 45), (90, 90, 40))
    constraints = ConstraintSet()
    first = validate(path, block_city, constraints)
    second = validate(path, block_city, constraints)
    assert first == second
    assert path == path_of((10, 10, 40), (50, 50, 45), (90, 90, 40))
    assert first.planning_time == 0.0


def test_record_serializes_infinite_clearance_as_null():
    record = MetricsRecord(path_length=10.0, turning_sum=0.5, violations=[Violation.SHARP_TURN])
    data = record.to_dict()
    assert data["min_clearance"] is None
    assert data["violations"] == ["SharpTurn"]
    assert record.violation_names() == "SharpTurn"
    assert not record.feasible


def test_constraint_set_for_scenario(small_scenario):
    c = ConstraintSet.for_scenario(small_scenario, safety_margin=2.0)
    assert c.max_range == 200.0
    assert c.max_altitude_delta == 30.0
    assert c.safety_margin == 2.0
    with pytest.raises(ValueError):
        ConstraintSet(max_range=0.0)


def test_zero_altitude_limit_means_level_flight(small_scenario):
    c = ConstraintSet.for_scenario(dataclasses.replace(small_scenario, max_altitude_delta=0.0))
    assert c.max_altitude_delta == 0.0
    city = CityMap(Vec3(0, 0, 0), Vec3(300, 300, 100))
    level = validate(path_of((80, 150, 25), (220, 150, 25)), city, c)
    climb = validate(path_of((80, 150, 25), (220, 150, 26)), city, c)
    assert level.violations == []
    assert climb.violations == [Violation.ALTITUDE_DELTA]
    with pytest.raises(ValueError):
        ConstraintSet(max_altitude_delta=-1.0)


def test_timed_noop_is_fast():
    result, elapsed = timed(lambda: 42)
    assert result == 42
    assert 0.0 <= elapsed < 0.05


def test_timed_sleep():
    _, elapsed = timed(time.sleep, 0.1)
    assert elapsed == pytest.approx(0.1, abs=0.05)


def test_timed_nesting():
    def inner():
        return timed(time.sleep, 0.02)

    (_, inner_elapsed), outer_elapsed = timed(inner)
    assert outer_elapsed >= inner_elapsed


def test_timed_propagates_errors():
    def boom():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        timed(boom)
