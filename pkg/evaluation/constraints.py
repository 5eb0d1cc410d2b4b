"""
Flight constraints a planned path is checked against.
"""

import enum
import math
from dataclasses import dataclass
from typing import Any, Dict


class Violation(str, enum.Enum):
    """Constraint violation kinds, named as they appear in reports."""
    CLEARANCE = "Clearance"
    SHARP_TURN = "SharpTurn"
    RANGE_EXCEEDED = "RangeExceeded"
    ALTITUDE_DELTA = "AltitudeDelta"


@dataclass(frozen=True)
class ConstraintSet:
    """
    Limits applied by validate.

    Attributes:
        safety_margin: Minimum clearance to every obstacle, meters
        sharp_turn_min_angle: Smallest acceptable interior angle at a vertex, degrees
        max_range: Longest acceptable path, meters
        max_altitude_delta: Largest acceptable |goal.z - start.z|, meters
    """
    safety_margin: float = 1.0
    sharp_turn_min_angle: float = 30.0
    max_range: float = 200.0
    max_altitude_delta: float = 30.0

    def __post_init__(self):
        for name in ("safety_margin", "sharp_turn_min_angle", "max_range"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive number, got {value}")
        # 0 is a level-flight requirement
        if not (math.isfinite(self.max_altitude_delta) and self.max_altitude_delta >= 0):
            raise ValueError(f"max_altitude_delta must be >= 0, got {self.max_altitude_delta}")
        if self.sharp_turn_min_angle > 180.0:
            raise ValueError("sharp_turn_min_angle must be <= 180 degrees")

    @classmethod
    def for_scenario(cls, scenario, **overrides) -> "ConstraintSet":
        """Constraints carrying a scenario's range and altitude limits."""
        values = {
            "max_range": scenario.max_range,
            "max_altitude_delta": scenario.max_altitude_delta,
        }
        values.update(overrides)
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "safety_margin": self.safety_margin,
            "sharp_turn_min_angle": self.sharp_turn_min_angle,
            "max_range": self.max_range,
            "max_altitude_delta": self.max_altitude_delta,
        }
