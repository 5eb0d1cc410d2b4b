"""
Bounded 3D city map and its collision queries.

The safety margin is applied by inflating every obstacle (Minkowski sum with a
margin cube), so every query below answers "is this clear by at least the
margin" with an exact box test. CityMap is immutable and its cached numpy
arrays are never written after construction, which makes a map safe to share
across concurrent planner runs.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from .geometry import (
    BoxObstacle,
    Vec3,
    boxes_to_arrays,
    point_box_distances,
    points_in_boxes,
    segment_box_distances,
    segments_hit_boxes,
)

logger = logging.getLogger(__name__)

DEFAULT_SAFETY_MARGIN = 1.0


@dataclass(frozen=True)
class CityMap:
    """
    Immutable urban world.

    Attributes:
        bounds_min: Lower corner of the flight volume (z = 0 is the ground)
        bounds_max: Upper corner of the flight volume (z = max building height)
        obstacles: Building boxes
        safety_margin: Required clearance from every obstacle, meters
    """
    bounds_min: Vec3
    bounds_max: Vec3
    obstacles: Tuple[BoxObstacle, ...] = ()
    safety_margin: float = DEFAULT_SAFETY_MARGIN

    _raw_lo: np.ndarray = field(init=False, repr=False, compare=False)
    _raw_hi: np.ndarray = field(init=False, repr=False, compare=False)
    _inflated_lo: np.ndarray = field(init=False, repr=False, compare=False)
    _inflated_hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "safety_margin", float(self.safety_margin))

        lo, hi = self.bounds_min, self.bounds_max
        if not (lo.x < hi.x and lo.y < hi.y and lo.z < hi.z):
            raise ValueError(f"bounds_min {lo} must be below bounds_max {hi} on every axis")
        if not math.isfinite(self.safety_margin) or self.safety_margin < 0:
            raise ValueError(f"safety_margin must be >= 0, got {self.safety_margin}")

        raw_lo, raw_hi = boxes_to_arrays(self.obstacles)
        if raw_lo.shape[0]:
            b_lo, b_hi = lo.as_array(), hi.as_array()
            outside = np.any(raw_lo < b_lo, axis=1) | np.any(raw_hi > b_hi, axis=1)
            if outside.any():
                first = int(np.argmax(outside))
                raise ValueError(f"obstacle {first} lies outside the map bounds")

        for name, arr in (("_raw_lo", raw_lo), ("_raw_hi", raw_hi),
                          ("_inflated_lo", raw_lo - self.safety_margin),
                          ("_inflated_hi", raw_hi + self.safety_margin)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    # ------------------------------------------------------------------ #
    #   Derived views
    # ------------------------------------------------------------------ #
    @property
    def ground_area(self) -> float:
        return (self.bounds_max.x - self.bounds_min.x) * (self.bounds_max.y - self.bounds_min.y)

    @property
    def diagonal(self) -> float:
        return self.bounds_min.distance_to(self.bounds_max)

    @property
    def inflated_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._inflated_lo, self._inflated_hi

    @property
    def obstacle_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._raw_lo, self._raw_hi

    def with_margin(self, safety_margin: float) -> "CityMap":
        """Same obstacles, different clearance requirement."""
        return replace(self, safety_margin=safety_margin)

    def contains(self, p: Vec3) -> bool:
        lo, hi = self.bounds_min, self.bounds_max
        return lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y and lo.z <= p.z <= hi.z

    def bounds_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.bounds_min.as_array(), self.bounds_max.as_array()


# ------------------------------------------------------------------ #
#   Collision queries
# ------------------------------------------------------------------ #

def is_point_free(city: CityMap, p: Vec3) -> bool:
    """True iff p is inside the bounds and outside every inflated obstacle."""
    if not city.contains(p):
        return False
    lo, hi = city.inflated_arrays
    return not bool(points_in_boxes(p.as_array(), lo, hi)[0])


def is_segment_free(city: CityMap, a: Vec3, b: Vec3) -> bool:
    """
    Exact segment test against every margin-inflated obstacle.

    The bounds are convex, so both endpoints inside means the whole segment is.
    """
    if not (city.contains(a) and city.contains(b)):
        return False
    lo, hi = city.inflated_arrays
    return not bool(segments_hit_boxes(a.as_array(), b.as_array(), lo, hi)[0])


def segments_free(city: CityMap, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """
    Batch form of is_segment_free over (M, 3) endpoint arrays.

    Returns:
        Boolean array of shape (M,)
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    ends = np.atleast_2d(np.asarray(ends, dtype=float))
    b_lo, b_hi = city.bounds_arrays()
    in_bounds = (
        np.all((starts >= b_lo) & (starts <= b_hi), axis=1)
        & np.all((ends >= b_lo) & (ends <= b_hi), axis=1)
    )
    lo, hi = city.inflated_arrays
    return in_bounds & ~segments_hit_boxes(starts, ends, lo, hi)


def point_clearance(city: CityMap, p: Vec3) -> float:
    """Distance from p to the nearest un-inflated obstacle (inf on an empty map)."""
    lo, hi = city.obstacle_arrays
    if lo.shape[0] == 0:
        return math.inf
    return float(point_box_distances(p.as_array(), lo, hi).min())


def segment_clearance(city: CityMap, a: Vec3, b: Vec3) -> float:
    """Exact distance from segment [a, b] to the nearest un-inflated obstacle."""
    lo, hi = city.obstacle_arrays
    if lo.shape[0] == 0:
        return math.inf
    return float(segment_box_distances(a.as_array(), b.as_array(), lo, hi).min())
