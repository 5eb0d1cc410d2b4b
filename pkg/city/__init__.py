"""
Urban environment model: seeded box-building cities, margin-inflated
collision queries and voxelization for grid planners.
"""

from .city_map import (
    DEFAULT_SAFETY_MARGIN,
    CityMap,
    is_point_free,
    is_segment_free,
    point_clearance,
    segment_clearance,
    segments_free,
)
from .errors import (
    CityError,
    DensityUnreachableError,
    EndpointBlockedError,
    GridBudgetError,
    ScenarioValidationError,
)
from .generator import GeneratorConfig, coverage_density, generate_city
from .geometry import BoxObstacle, Vec3
from .occupancy import DEFAULT_RESOLUTION, GridIndex, OccupancyGrid, voxelize
from .scenario import ScenarioSpec
from .schema_validator import ScenarioValidator
from .serialization import city_from_dict, city_to_dict, scenario_from_dict, scenario_to_dict

__all__ = [
    "DEFAULT_SAFETY_MARGIN",
    "DEFAULT_RESOLUTION",
    "CityMap",
    "is_point_free",
    "is_segment_free",
    "segments_free",
    "point_clearance",
    "segment_clearance",
    "CityError",
    "DensityUnreachableError",
    "EndpointBlockedError",
    "GridBudgetError",
    "ScenarioValidationError",
    "GeneratorConfig",
    "coverage_density",
    "generate_city",
    "BoxObstacle",
    "Vec3",
    "GridIndex",
    "OccupancyGrid",
    "voxelize",
    "ScenarioSpec",
    "ScenarioValidator",
    "city_from_dict",
    "city_to_dict",
    "scenario_from_dict",
    "scenario_to_dict",
]
