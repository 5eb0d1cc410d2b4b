"""
Path evaluation: length, turning, clearance and constraint checks, plus
planner timing.
"""

from .constraints import ConstraintSet, Violation
from .metrics import (
    DegenerateSegmentError,
    MetricsRecord,
    interior_angle,
    min_clearance,
    path_length,
    turning_angles,
    validate,
)
from .timing import timed

__all__ = [
    "ConstraintSet",
    "Violation",
    "DegenerateSegmentError",
    "MetricsRecord",
    "interior_angle",
    "min_clearance",
    "path_length",
    "turning_angles",
    "validate",
    "timed",
]
