"""
Path quality metrics and constraint validation.

path_length and turning_angles are the two geometric scores the benchmark
compares; validate bundles them with the exact clearance to the raw
(un-inflated) buildings and the list of constraint violations.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple, Union

from city.city_map import CityMap, point_clearance, segment_clearance
from city.geometry import Vec3
from planners.common import Path

from .constraints import ConstraintSet, Violation

logger = logging.getLogger(__name__)


class DegenerateSegmentError(ValueError):
    """Two consecutive waypoints coincide, so the turn at that vertex is undefined."""
    pass


@dataclass
class MetricsRecord:
    """
    Scores of one path.

    Attributes:
        path_length: Sum of segment lengths, meters
        turning_sum: Sum of deflection angles, radians
        planning_time: Planner wall time in seconds (filled in by the caller)
        min_clearance: Smallest distance from the path to any building, meters
        violations: Constraint violations found
        turn_count: Vertices with a nonzero deflection
        altitude_span: Highest minus lowest waypoint altitude, meters
        waypoint_count: Number of waypoints
    """
    path_length: float
    turning_sum: float
    planning_time: float = 0.0
    min_clearance: float = math.inf
    violations: List[Violation] = field(default_factory=list)
    turn_count: int = 0
    altitude_span: float = 0.0
    waypoint_count: int = 0

    @property
    def feasible(self) -> bool:
        return not self.violations

    def violation_names(self) -> str:
        return ";".join(v.value for v in self.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "path_length": self.path_length,
            "turning_sum": self.turning_sum,
            "planning_time": self.planning_time,
            "min_clearance": None if math.isinf(self.min_clearance) else self.min_clearance,
            "violations": [v.value for v in self.violations],
            "turn_count": self.turn_count,
            "altitude_span": self.altitude_span,
            "waypoint_count": self.waypoint_count,
        }


def _points(path: Union[Path, Sequence[Vec3]]) -> Sequence[Vec3]:
    # Raw waypoint sequences are accepted so degenerate input can be scored too
    return path.waypoints if isinstance(path, Path) else tuple(path)


def path_length(path: Union[Path, Sequence[Vec3]]) -> float:
    """Sum of Euclidean segment lengths (0 for a single waypoint)."""
    w = _points(path)
    return math.fsum(w[i].distance_to(w[i + 1]) for i in range(len(w) - 1))


def _deflection(p0, p1, p2) -> float:
    a = (p1.x - p0.x, p1.y - p0.y, p1.z - p0.z)
    b = (p2.x - p1.x, p2.y - p1.y, p2.z - p1.z)
    na = math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
    nb = math.sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2])
    if na == 0.0 or nb == 0.0:
        raise DegenerateSegmentError(f"zero-length segment at {p1.as_tuple()}")
    cos_theta = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (na * nb)
    return math.acos(min(1.0, max(-1.0, cos_theta)))


def turning_angles(path: Union[Path, Sequence[Vec3]]) -> Tuple[float, List[float]]:
    """
    Deflection angle at every interior vertex.

    Returns:
        (sum in radians, per-vertex radians in path order)

    Raises:
        DegenerateSegmentError: Consecutive waypoints coincide
    """
    w = _points(path)
    per_vertex = [_deflection(w[i - 1], w[i], w[i + 1]) for i in range(1, len(w) - 1)]
    return math.fsum(per_vertex), per_vertex


def interior_angle(path: Union[Path, Sequence[Vec3]], index: int) -> float:
    """
    Interior angle in degrees at an interior vertex: 180 minus the deflection.

    Raises:
        IndexError: index is not an interior vertex
        DegenerateSegmentError: A segment at the vertex has zero length
    """
    w = _points(path)
    if not 0 < index < len(w) - 1:
        raise IndexError(f"vertex {index} is not interior to a {len(w)}-waypoint path")
    return 180.0 - math.degrees(_deflection(w[index - 1], w[index], w[index + 1]))


def min_clearance(path: Path, city: CityMap) -> float:
    """Exact smallest distance from any segment (or the lone waypoint) to a building."""
    if len(path) == 1:
        return point_clearance(city, path.start)
    return min(segment_clearance(city, a, b) for a, b in path.segments())


def validate(path: Path, city: CityMap, constraints: ConstraintSet) -> MetricsRecord:
    """
    Score a path and list the constraints it breaks.

    Violations are data, not failures. planning_time is left at 0; the caller
    times the planner separately.
    """
    length = path_length(path)
    turning_sum, per_vertex = turning_angles(path)
    clearance = min_clearance(path, city)

    violations: List[Violation] = []
    if clearance < constraints.safety_margin:
        violations.append(Violation.CLEARANCE)
    if any(180.0 - math.degrees(theta) < constraints.sharp_turn_min_angle for theta in per_vertex):
        violations.append(Violation.SHARP_TURN)
    if length > constraints.max_range:
        violations.append(Violation.RANGE_EXCEEDED)
    if abs(path.goal.z - path.start.z) > constraints.max_altitude_delta:
        violations.append(Violation.ALTITUDE_DELTA)

    zs = [w.z for w in path.waypoints]
    record = MetricsRecord(
        path_length=length,
        turning_sum=turning_sum,
        min_clearance=clearance,
        violations=violations,
        turn_count=sum(1 for theta in per_vertex if theta > 0.0),
        altitude_span=max(zs) - min(zs),
        waypoint_count=len(path),
    )
    if violations:
        logger.debug("path violates %s", record.violation_names())
    return record
