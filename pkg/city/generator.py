"""
Seeded procedural city generation.

Buildings are axis-aligned boxes with integer-meter footprints placed by
rejection sampling until the union of their ground footprints reaches the
scenario's target coverage. Integer footprints let a 1 m raster track the
covered area exactly while placing.

Randomness comes from numpy's PCG64 bit generator (`numpy.random.default_rng`),
whose output stream is fixed by the seed on every platform.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .city_map import DEFAULT_SAFETY_MARGIN, CityMap, is_point_free
from .errors import DensityUnreachableError, EndpointBlockedError
from .geometry import BoxObstacle, Vec3
from .scenario import ScenarioSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Building generator parameters.

    Attributes:
        footprint_side_range: Inclusive (min, max) footprint side in whole meters
        height_range: (min, max) roof height, further capped by the scenario ceiling
        coverage_tolerance: Accepted |coverage - target| while placing
        max_attempts: Placement attempts before the target is declared unreachable
        endpoint_clearance: Extra keep-out beyond the safety margin around start/goal
        safety_margin: Clearance carried by the generated CityMap
    """
    footprint_side_range: Tuple[int, int] = (20, 80)
    height_range: Tuple[float, float] = (10.0, 100.0)
    coverage_tolerance: float = 0.01
    max_attempts: int = 200_000
    endpoint_clearance: float = 5.0
    safety_margin: float = DEFAULT_SAFETY_MARGIN

    def __post_init__(self):
        lo, hi = self.footprint_side_range
        if not (1 <= lo <= hi):
            raise ValueError(f"footprint_side_range must satisfy 1 <= min <= max, got {self.footprint_side_range}")
        h_lo, h_hi = self.height_range
        if not (0 < h_lo <= h_hi):
            raise ValueError(f"height_range must satisfy 0 < min <= max, got {self.height_range}")
        if not 0 <= self.coverage_tolerance < 0.5:
            raise ValueError("coverage_tolerance must be in [0, 0.5)")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.endpoint_clearance < 0 or self.safety_margin < 0:
            raise ValueError("endpoint_clearance and safety_margin must be >= 0")


def generate_city(spec: ScenarioSpec, config: Optional[GeneratorConfig] = None) -> CityMap:
    """
    Build the city for a scenario.

    Args:
        spec: Scenario parameters (size, density, endpoints, seed)
        config: Generator parameters; defaults to GeneratorConfig()

    Returns:
        CityMap whose footprint coverage is within the configured tolerance of
        spec.obstacle_density and whose start and goal are free

    Raises:
        DensityUnreachableError: Target coverage not met within max_attempts
        EndpointBlockedError: Start or goal not free in the finished map
    """
    config = config or GeneratorConfig()
    width, depth = spec.map_size
    ceiling = spec.max_building_height
    target = spec.obstacle_density

    obstacles = []
    if target > 0.0:
        obstacles = _place_buildings(spec, config)

    city = CityMap(
        bounds_min=spec.bounds_min,
        bounds_max=Vec3(width, depth, ceiling),
        obstacles=tuple(obstacles),
        safety_margin=config.safety_margin,
    )

    for which, point in (("start", spec.start), ("goal", spec.goal)):
        if not is_point_free(city, point):
            raise EndpointBlockedError(which, point.as_tuple())

    logger.debug(
        "scenario %d seed %d: %d buildings, coverage %.4f (target %.2f)",
        spec.scenario_id, spec.seed, len(obstacles), coverage_density(city), target,
    )
    return city


def _place_buildings(spec: ScenarioSpec, config: GeneratorConfig):
    width, depth = spec.map_size
    cols, rows = int(math.floor(width)), int(math.floor(depth))
    ground_area = width * depth
    target = spec.obstacle_density
    tol = config.coverage_tolerance

    side_lo, side_hi = config.footprint_side_range
    h_lo = min(config.height_range[0], spec.max_building_height)
    h_hi = min(config.height_range[1], spec.max_building_height)
    keep_out = config.safety_margin + config.endpoint_clearance
    endpoints = np.array([spec.start.as_tuple(), spec.goal.as_tuple()])

    rng = np.random.default_rng(spec.seed)
    raster = np.zeros((rows, cols), dtype=bool)
    covered = 0
    obstacles = []

    for attempt in range(1, config.max_attempts + 1):
        sx = min(int(rng.integers(side_lo, side_hi + 1)), cols)
        sy = min(int(rng.integers(side_lo, side_hi + 1)), rows)
        x0 = int(rng.integers(0, cols - sx + 1))
        y0 = int(rng.integers(0, rows - sy + 1))
        height = float(rng.uniform(h_lo, h_hi))

        lo = np.array([x0 - keep_out, y0 - keep_out, -keep_out])
        hi = np.array([x0 + sx + keep_out, y0 + sy + keep_out, height + keep_out])
        if np.any(np.all((endpoints >= lo) & (endpoints <= hi), axis=1)):
            continue

        block = raster[y0:y0 + sy, x0:x0 + sx]
        added = sx * sy - int(block.sum())
        if (covered + added) / ground_area > target + tol:
            continue

        block[...] = True
        covered += added
        obstacles.append(BoxObstacle(Vec3(x0, y0, 0.0), Vec3(x0 + sx, y0 + sy, height)))
        if covered / ground_area >= target - tol:
            return obstacles

    raise DensityUnreachableError(target, covered / ground_area, config.max_attempts)


def coverage_density(city: CityMap) -> float:
    """
    Union-of-footprints area divided by the map's ground area.

    Exact: footprint edges are compressed into a non-uniform grid whose cells
    are either fully covered or fully empty.
    """
    if not city.obstacles:
        return 0.0
    lo, hi = city.obstacle_arrays
    b_lo, b_hi = city.bounds_arrays()
    x0 = np.clip(lo[:, 0], b_lo[0], b_hi[0])
    x1 = np.clip(hi[:, 0], b_lo[0], b_hi[0])
    y0 = np.clip(lo[:, 1], b_lo[1], b_hi[1])
    y1 = np.clip(hi[:, 1], b_lo[1], b_hi[1])

    xs = np.unique(np.concatenate([x0, x1]))
    ys = np.unique(np.concatenate([y0, y1]))
    if xs.size < 2 or ys.size < 2:
        return 0.0
    covered = np.zeros((ys.size - 1, xs.size - 1), dtype=bool)
    i0, i1 = np.searchsorted(xs, x0), np.searchsorted(xs, x1)
    j0, j1 = np.searchsorted(ys, y0), np.searchsorted(ys, y1)
    for a, b, c, d in zip(i0, i1, j0, j1):
        covered[c:d, a:b] = True

    cell_area = np.outer(np.diff(ys), np.diff(xs))
    area = float((cell_area * covered).sum())
    return min(1.0, area / city.ground_area)
