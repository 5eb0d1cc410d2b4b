import numpy as np
import pytest

from city.city_map import CityMap, is_point_free
from city.errors import GridBudgetError
from city.generator import generate_city
from city.geometry import BoxObstacle, Vec3
from city.occupancy import GridIndex, OccupancyGrid, voxelize
from city.scenario import ScenarioSpec


def test_empty_map_voxelizes_free(empty_city):
    grid = voxelize(empty_city, 10.0)
    assert grid.dims == (10, 10, 5)
    assert not grid.occupancy.any()


def test_full_map_box_blocks_everything():
    city = CityMap(Vec3(0, 0, 0), Vec3(100, 100, 50), (BoxObstacle(Vec3(0, 0, 0), Vec3(100, 100, 50)),))
    assert voxelize(city, 10.0).occupancy.all()


def test_cells_agree_with_point_test_at_centers():
    spec = ScenarioSpec(
        scenario_id=2, map_size=(200.0, 200.0), obstacle_density=0.3, max_building_height=100.0,
        start=Vec3(10, 100, 50), goal=Vec3(190, 100, 50), max_range=200.0, max_altitude_delta=30.0, seed=1,
    )
    city = generate_city(spec)
    grid = voxelize(city, 5.0)
    nx, ny, nz = grid.dims
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                idx = GridIndex(i, j, k)
                assert grid.is_free(idx) == is_point_free(city, grid.cell_center(idx))


def test_centers_past_the_bounds_are_occupied():
    city = CityMap(Vec3(0, 0, 0), Vec3(24, 20, 20))
    grid = voxelize(city, 10.0)
    assert grid.dims == (3, 2, 2)
    assert grid.occupancy[2].all()
    assert not grid.occupancy[:2].any()


def test_cell_budget_is_enforced(empty_city):
    with pytest.raises(GridBudgetError) as err:
        voxelize(empty_city, 1.0, cell_budget=1000)
    assert err.value.cells == 100 * 100 * 50


def test_non_positive_resolution_is_rejected(empty_city):
    with pytest.raises(ValueError):
        voxelize(empty_city, 0.0)


def test_index_of_clamps_to_the_lattice(empty_city):
    grid = voxelize(empty_city, 10.0)
    assert grid.index_of(Vec3(15, 25, 35)) == GridIndex(1, 2, 3)
    assert grid.index_of(Vec3(100, 100, 50)) == GridIndex(9, 9, 4)
    assert grid.cell_center(GridIndex(0, 0, 0)) == Vec3(5, 5, 5)


def test_cells_near_are_free_and_sorted(wall_city):
    grid = voxelize(wall_city, 10.0)
    p = Vec3(38, 50, 10)
    cells = grid.cells_near(p, 2)
    assert cells
    assert all(grid.is_free(c) for c in cells)
    distances = [grid.cell_center(c).distance_to(p) for c in cells]
    assert distances == sorted(distances)


def test_grid_is_read_only(empty_city):
    grid = voxelize(empty_city, 10.0)
    with pytest.raises(ValueError):
        grid.occupancy[0, 0, 0] = True


def test_grid_requires_three_dimensions():
    with pytest.raises(ValueError):
        OccupancyGrid(1.0, Vec3(0, 0, 0), np.zeros((3, 3), dtype=bool))


def test_iter_free_lists_every_free_cell(wall_city):
    grid = voxelize(wall_city, 10.0)
    free = list(grid.iter_free())
    assert len(free) == int((~grid.occupancy).sum())
    assert all(grid.is_free(idx) for idx in free)
