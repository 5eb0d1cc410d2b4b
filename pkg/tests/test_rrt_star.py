import math

import numpy as np
import pytest

from city.city_map import CityMap, is_point_free, is_segment_free
from city.geometry import BoxObstacle, Vec3
from evaluation.metrics import path_length
from planners.common import NoPathError, StartBlockedError
from planners.rrt_star import (
    ExtendStatus,
    RrtConfig,
    RrtTree,
    best_goal_connection,
    extend,
    plan_rrtstar,
    sample_point,
    steer,
)


@pytest.fixture
def pillar_city():
    return CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (BoxObstacle(Vec3(45, 45, 0), Vec3(55, 55, 50)),))


def test_goal_bias_one_always_returns_goal(empty_city, rng):
    goal = Vec3(90, 90, 10)
    config = RrtConfig(goal_bias=1.0)
    assert all(sample_point(empty_city, goal, config, rng) == goal for _ in range(100))


def test_unbiased_samples_are_uniform(empty_city, rng):
    config = RrtConfig(goal_bias=0.0)
    draws = np.array([sample_point(empty_city, Vec3(1, 1, 1), config, rng).as_array() for _ in range(2000)])
    assert (draws >= 0).all()
    assert (draws.max(axis=0) <= [100, 100, 50]).all()
    sigma = np.array([100, 100, 50]) / math.sqrt(12) / math.sqrt(len(draws))
    assert (np.abs(draws.mean(axis=0) - [50, 50, 25]) < 4 * sigma).all()


def test_goal_bias_half_hits_goal_half_the_time(empty_city, rng):
    goal = Vec3(90, 90, 10)
    config = RrtConfig(goal_bias=0.5)
    hits = sum(sample_point(empty_city, goal, config, rng) == goal for _ in range(10_000))
    assert 4700 <= hits <= 5300


def test_samples_avoid_obstacles(wall_city, rng):
    config = RrtConfig(goal_bias=0.0)
    for _ in range(200):
        assert is_point_free(wall_city, sample_point(wall_city, Vec3(90, 50, 10), config, rng))


def test_nearest_matches_brute_force(rng):
    tree = RrtTree(Vec3(50, 50, 25))
    for _ in range(200):
        tree.add(Vec3.from_iterable(rng.uniform([0, 0, 0], [100, 100, 50])), 0)
    for q in rng.uniform([0, 0, 0], [100, 100, 50], size=(50, 3)):
        expected = int(np.argmin(np.linalg.norm(tree.positions - q, axis=1)))
        assert tree.nearest(Vec3.from_iterable(q)) == expected


def test_nearest_prefers_lowest_id_on_ties():
    tree = RrtTree(Vec3(0, 0, 10))
    tree.add(Vec3(60, 50, 10), 0)
    tree.add(Vec3(40, 50, 10), 0)
    assert tree.nearest(Vec3(50, 50, 10)) == 1


def test_steer_limits_the_step():
    assert steer(Vec3(0, 0, 0), Vec3(10, 0, 0), 2.0) == Vec3(2, 0, 0)
    assert steer(Vec3(0, 0, 0), Vec3(1, 1, 0), 2.0) == Vec3(1, 1, 0)
    with pytest.raises(ValueError):
        steer(Vec3(1, 2, 3), Vec3(1, 2, 3), 2.0)


def test_rewire_propagates_cost_to_descendants(empty_city):
    tree = RrtTree(Vec3(0, 0, 10))
    b = tree.add(Vec3(0, 20, 10), 0)
    c = tree.add(Vec3(10, 20, 10), b)
    d = tree.add(Vec3(20, 20, 10), c)
    assert tree.cost(c) == pytest.approx(30.0)
    assert tree.cost(d) == pytest.approx(40.0)

    outcome = extend(tree, empty_city, Vec3(10, 5, 10),
                     RrtConfig(goal_bias=0.0, step_size=12.0, neighbor_radius=16.0))
    assert outcome.status is ExtendStatus.ADDED
    assert outcome.rewired == (c,)
    new = outcome.node_id
    assert tree.parent[new] == 0
    assert tree.parent[c] == new
    assert tree.cost(c) == pytest.approx(math.sqrt(125.0) + 15.0)
    assert tree.cost(d) == pytest.approx(math.sqrt(125.0) + 25.0)
    assert c not in tree.children[b]
    assert tree.validate(empty_city) == []


def test_rewire_refuses_cycles():
    tree = RrtTree(Vec3(0, 0, 0))
    a = tree.add(Vec3(1, 0, 0), 0)
    b = tree.add(Vec3(2, 0, 0), a)
    with pytest.raises(ValueError):
        tree.rewire(a, b)


def test_extend_into_wall_is_a_collision(wall_city):
    tree = RrtTree(Vec3(35, 50, 10))
    outcome = extend(tree, wall_city, Vec3(70, 50, 10), RrtConfig())
    assert outcome.status is ExtendStatus.COLLISION
    assert len(tree) == 1


def test_tree_stays_valid_under_random_extension(wall_city, rng):
    tree = RrtTree(Vec3(10, 50, 10))
    config = RrtConfig(goal_bias=0.1)
    goal = Vec3(90, 50, 10)
    for _ in range(300):
        extend(tree, wall_city, sample_point(wall_city, goal, config, rng), config)
    assert len(tree) > 1
    assert tree.validate(wall_city) == []


def test_best_goal_connection_without_nearby_nodes(empty_city):
    tree = RrtTree(Vec3(0, 0, 0))
    assert best_goal_connection(tree, empty_city, Vec3(90, 90, 40), 10.0) == (None, math.inf)


def test_plan_on_empty_map_is_near_straight(empty_city):
    start, goal = Vec3(25, 50, 25), Vec3(75, 50, 25)
    path, stats = plan_rrtstar(empty_city, start, goal, RrtConfig(max_iterations=300, seed=1))
    assert path.start == start
    assert path.goal == goal
    assert 50.0 - 1e-9 <= path_length(path) <= 55.0
    assert stats.cost_history[-1] == pytest.approx(path_length(path))
    assert stats.iterations == 300


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_checkpoint_costs_never_increase(pillar_city, seed):
    start, goal = Vec3(10, 50, 25), Vec3(90, 50, 25)
    path, stats = plan_rrtstar(pillar_city, start, goal,
                               RrtConfig(max_iterations=1000, checkpoint_interval=50, seed=seed))
    history = stats.cost_history
    assert len(history) == 20
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert all(is_segment_free(pillar_city, a, b) for a, b in path.segments())
    assert path_length(path) > 80.0


def test_plan_is_deterministic_for_a_seed(pillar_city):
    config = RrtConfig(max_iterations=1000, seed=5)
    first, _ = plan_rrtstar(pillar_city, Vec3(10, 50, 25), Vec3(90, 50, 25), config)
    second, _ = plan_rrtstar(pillar_city, Vec3(10, 50, 25), Vec3(90, 50, 25), config)
    assert first == second


def test_sealed_goal_has_no_path():
    sealed = CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (BoxObstacle(Vec3(40, 0, 0), Vec3(60, 100, 50)),))
    with pytest.raises(NoPathError):
        plan_rrtstar(sealed, Vec3(10, 50, 25), Vec3(90, 50, 25), RrtConfig(max_iterations=200))


def test_blocked_start_is_rejected(wall_city):
    with pytest.raises(StartBlockedError):
        plan_rrtstar(wall_city, Vec3(50, 50, 10), Vec3(90, 50, 10))


def test_config_validation():
    with pytest.raises(ValueError):
        RrtConfig(goal_bias=1.5)
    with pytest.raises(ValueError):
        RrtConfig(step_size=30.0, neighbor_radius=20.0)


def test_tree_node_view():
    tree = RrtTree(Vec3(0, 0, 0))
    n = tree.add(Vec3(3, 4, 0), 0)
    node = tree.node(n)
    assert node.parent == 0
    assert node.position == Vec3(3, 4, 0)
    assert node.cost == pytest.approx(5.0)
    assert tree.node(0).parent is None


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_best_cost_never_increases_over_a_full_run(pillar_city, seed):
    _, stats = plan_rrtstar(pillar_city, Vec3(10, 50, 25), Vec3(90, 50, 25),
                            RrtConfig(max_iterations=5000, checkpoint_interval=1, seed=seed))
    history = stats.cost_history
    assert len(history) == 5000
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert math.isfinite(history[-1])
