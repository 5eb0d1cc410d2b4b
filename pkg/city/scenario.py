"""
Experiment scenario description.
"""

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import ScenarioValidationError
from .geometry import Vec3

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class ScenarioSpec:
    """
    One experiment scenario.

    Attributes:
        scenario_id: Scenario number, 1..6
        map_size: (width, depth) of the ground plane in meters
        obstacle_density: Target ground-footprint coverage fraction
        max_building_height: Ceiling of the flight volume in meters
        start: Start position
        goal: Goal position
        max_range: Flying range limit in meters
        max_altitude_delta: Largest allowed |goal.z - start.z| in meters
        seed: Generator seed for the city layout
    """
    scenario_id: int
    map_size: Tuple[float, float]
    obstacle_density: float
    max_building_height: float
    start: Vec3
    goal: Vec3
    max_range: float
    max_altitude_delta: float
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "map_size", tuple(float(v) for v in self.map_size))
        errors = self.validation_errors()
        if errors:
            raise ScenarioValidationError(errors)

    def validation_errors(self):
        errors = []
        if not 1 <= self.scenario_id <= 6:
            errors.append(f"scenario_id must be in 1..6, got {self.scenario_id}")
        if len(self.map_size) != 2 or not all(math.isfinite(v) and v > 0 for v in self.map_size):
            errors.append(f"map_size must be two positive lengths, got {self.map_size}")
        if not 0.0 <= self.obstacle_density <= 1.0:
            errors.append(f"obstacle_density must be in [0, 1], got {self.obstacle_density}")
        if not self.max_building_height > 0:
            errors.append(f"max_building_height must be > 0, got {self.max_building_height}")
        if not self.max_range > 0:
            errors.append(f"max_range must be > 0, got {self.max_range}")
        if not self.max_altitude_delta >= 0:
            errors.append(f"max_altitude_delta must be >= 0, got {self.max_altitude_delta}")
        if not 0 <= self.seed <= MAX_SEED:
            errors.append(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if abs(self.goal.z - self.start.z) > self.max_altitude_delta:
            errors.append(
                f"|goal.z - start.z| = {abs(self.goal.z - self.start.z)} exceeds "
                f"max_altitude_delta {self.max_altitude_delta}"
            )
        if not errors:
            for name, p in (("start", self.start), ("goal", self.goal)):
                if not self.contains(p):
                    errors.append(f"{name} {p.as_tuple()} lies outside the map bounds")
        return errors

    @property
    def bounds_min(self) -> Vec3:
        return Vec3(0.0, 0.0, 0.0)

    @property
    def bounds_max(self) -> Vec3:
        return Vec3(self.map_size[0], self.map_size[1], self.max_building_height)

    @property
    def altitude_delta(self) -> float:
        return abs(self.goal.z - self.start.z)

    def contains(self, p: Vec3) -> bool:
        hi = self.bounds_max
        return 0.0 <= p.x <= hi.x and 0.0 <= p.y <= hi.y and 0.0 <= p.z <= hi.z
