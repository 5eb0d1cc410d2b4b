"""
Geometric primitives for the urban environment.

Vec3 and BoxObstacle are small immutable value types. The vectorised helpers
at the bottom of the module work on (N, 3) arrays of box corners so that a
single query is tested against every obstacle in one numpy pass.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np


@dataclass(frozen=True)
class Vec3:
    """A point or displacement in meters."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Vec3.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "Vec3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def distance_to(self, other: "Vec3") -> float:
        return math.sqrt(
            (other.x - self.x) ** 2 + (other.y - self.y) ** 2 + (other.z - self.z) ** 2
        )

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


@dataclass(frozen=True)
class BoxObstacle:
    """
    Axis-aligned building volume.

    Attributes:
        min_corner: Lower corner (ground footprint origin, z = base)
        max_corner: Upper corner (z = roof height)
    """
    min_corner: Vec3
    max_corner: Vec3

    def __post_init__(self):
        lo, hi = self.min_corner, self.max_corner
        if lo.x > hi.x or lo.y > hi.y or lo.z > hi.z:
            raise ValueError(f"BoxObstacle corners out of order: {lo} > {hi}")

    @property
    def footprint_area(self) -> float:
        return (self.max_corner.x - self.min_corner.x) * (self.max_corner.y - self.min_corner.y)

    @property
    def height(self) -> float:
        return self.max_corner.z - self.min_corner.z

    @property
    def center(self) -> Vec3:
        return Vec3(
            0.5 * (self.min_corner.x + self.max_corner.x),
            0.5 * (self.min_corner.y + self.max_corner.y),
            0.5 * (self.min_corner.z + self.max_corner.z),
        )

    def inflated(self, margin: float) -> "BoxObstacle":
        """Minkowski sum with a cube of half-side `margin`."""
        lo, hi = self.min_corner, self.max_corner
        return BoxObstacle(
            Vec3(lo.x - margin, lo.y - margin, lo.z - margin),
            Vec3(hi.x + margin, hi.y + margin, hi.z + margin),
        )

    def contains(self, p: Vec3) -> bool:
        """Closed-box membership test."""
        lo, hi = self.min_corner, self.max_corner
        return lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y and lo.z <= p.z <= hi.z


# ------------------------------------------------------------------ #
#   Vectorised queries over arrays of boxes
# ------------------------------------------------------------------ #

def boxes_to_arrays(boxes: Iterable[BoxObstacle]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack box corners into (N, 3) lower and upper arrays."""
    boxes = list(boxes)
    if not boxes:
        empty = np.zeros((0, 3), dtype=float)
        return empty, empty.copy()
    lo = np.array([b.min_corner.as_tuple() for b in boxes], dtype=float)
    hi = np.array([b.max_corner.as_tuple() for b in boxes], dtype=float)
    return lo, hi


def points_in_boxes(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """
    Closed membership of M points in any of N boxes.

    Returns:
        Boolean array of shape (M,), True where the point lies in at least one box
    """
    points = np.atleast_2d(points)
    if lo.shape[0] == 0:
        return np.zeros(points.shape[0], dtype=bool)
    p = points[:, None, :]
    inside = np.all((p >= lo[None, :, :]) & (p <= hi[None, :, :]), axis=2)
    return inside.any(axis=1)


def segments_hit_boxes(starts: np.ndarray, ends: np.ndarray,
                       lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """
    Exact slab test of M segments against N closed boxes.

    A segment a + t (b - a), t in [0, 1], hits a box when the intersection of
    the per-axis parameter intervals is non-empty. Axes along which the
    segment does not move contribute either (-inf, inf) or the empty set.

    Returns:
        Boolean array of shape (M,), True where the segment touches any box
    """
    starts = np.atleast_2d(starts).astype(float)
    ends = np.atleast_2d(ends).astype(float)
    m = starts.shape[0]
    if lo.shape[0] == 0 or m == 0:
        return np.zeros(m, dtype=bool)

    a = starts[:, None, :]
    d = (ends - starts)[:, None, :]
    moving = d != 0.0
    safe_d = np.where(moving, d, 1.0)

    t1 = (lo[None, :, :] - a) / safe_d
    t2 = (hi[None, :, :] - a) / safe_d
    t_near = np.where(moving, np.minimum(t1, t2), -np.inf)
    t_far = np.where(moving, np.maximum(t1, t2), np.inf)

    # Static axes must already lie inside the slab
    static_ok = moving | ((a >= lo[None, :, :]) & (a <= hi[None, :, :]))

    enter = np.maximum(t_near.max(axis=2), 0.0)
    leave = np.minimum(t_far.min(axis=2), 1.0)
    hit = (enter <= leave) & static_ok.all(axis=2)
    return hit.any(axis=1)


def point_box_distances(p: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Euclidean distance from one point to each of N boxes (0 inside)."""
    gap = np.maximum(np.maximum(lo - p, 0.0), p - hi)
    return np.sqrt((gap * gap).sum(axis=1))


def segment_box_distances(a: np.ndarray, b: np.ndarray,
                          lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """
    Exact minimum distance from segment [a, b] to each of N boxes.

    The squared distance along the segment is piecewise quadratic in t with
    breakpoints where a coordinate crosses a box face. Its minimum is attained
    at a breakpoint, an endpoint, or the stationary point of one piece, so
    evaluating the true distance at all of those candidates is exact.
    """
    n = lo.shape[0]
    if n == 0:
        return np.zeros(0, dtype=float)
    a = np.asarray(a, dtype=float)
    d = np.asarray(b, dtype=float) - a

    moving = d != 0.0
    safe_d = np.where(moving, d, 1.0)
    t_lo = np.where(moving, (lo - a) / safe_d, 0.0)
    t_hi = np.where(moving, (hi - a) / safe_d, 0.0)
    ts = np.concatenate(
        [np.zeros((n, 1)), np.ones((n, 1)), np.clip(t_lo, 0.0, 1.0), np.clip(t_hi, 0.0, 1.0)],
        axis=1,
    )
    ts.sort(axis=1)

    # Stationary point of each quadratic piece, located with its midpoint state
    mids = 0.5 * (ts[:, :-1] + ts[:, 1:])
    p_mid = a[None, None, :] + mids[:, :, None] * d[None, None, :]
    below = p_mid < lo[:, None, :]
    above = p_mid > hi[:, None, :]
    target = np.where(below, lo[:, None, :], np.where(above, hi[:, None, :], 0.0))
    active = below | above
    num = np.where(active, d[None, None, :] * (target - a[None, None, :]), 0.0).sum(axis=2)
    den = np.where(active, d[None, None, :] ** 2, 0.0).sum(axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_star = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), mids)
    t_star = np.clip(t_star, ts[:, :-1], ts[:, 1:])

    candidates = np.concatenate([ts, t_star], axis=1)
    pts = a[None, None, :] + candidates[:, :, None] * d[None, None, :]
    gap = np.maximum(np.maximum(lo[:, None, :] - pts, 0.0), pts - hi[:, None, :])
    dist = np.sqrt((gap * gap).sum(axis=2))
    return dist.min(axis=1)
