"""
Types shared by every planner: the Path output, search statistics and the
planner exception hierarchy.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from city.geometry import Vec3


class PlannerError(Exception):
    """Base exception for planning failures."""
    pass


class StartBlockedError(PlannerError):
    """Start position (or its grid cell) is not free."""
    pass


class GoalBlockedError(PlannerError):
    """Goal position (or its grid cell) is not free."""
    pass


class NoPathError(PlannerError):
    """The search finished without connecting start and goal."""
    pass


class NoFeasiblePathError(NoPathError):
    """
    A path was produced but still violates the collision constraint.

    Attributes:
        path: The flagged path, kept for inspection
        stats: Search statistics of the run
    """

    def __init__(self, message: str, path: "Path", stats: "SearchStats"):
        super().__init__(message)
        self.path = path
        self.stats = stats


@dataclass(frozen=True)
class Path:
    """Ordered waypoint sequence in meters; at least one waypoint, no repeats in a row."""
    waypoints: Tuple[Vec3, ...]

    def __post_init__(self):
        waypoints = tuple(self.waypoints)
        if not waypoints:
            raise ValueError("Path needs at least one waypoint")
        for i in range(1, len(waypoints)):
            if waypoints[i] == waypoints[i - 1]:
                raise ValueError(f"Path waypoints {i - 1} and {i} coincide")
        object.__setattr__(self, "waypoints", waypoints)

    @classmethod
    def from_array(cls, points: np.ndarray) -> "Path":
        return cls(tuple(Vec3.from_iterable(row) for row in np.atleast_2d(points)))

    @classmethod
    def from_points(cls, points: Sequence[Vec3]) -> "Path":
        """Build a path, silently dropping consecutive duplicates."""
        kept: List[Vec3] = []
        for p in points:
            if not kept or kept[-1] != p:
                kept.append(p)
        return cls(tuple(kept))

    def as_array(self) -> np.ndarray:
        return np.array([w.as_tuple() for w in self.waypoints], dtype=float)

    @property
    def start(self) -> Vec3:
        return self.waypoints[0]

    @property
    def goal(self) -> Vec3:
        return self.waypoints[-1]

    def segments(self):
        return zip(self.waypoints[:-1], self.waypoints[1:])

    def __len__(self) -> int:
        return len(self.waypoints)

    def to_dict(self) -> Dict[str, Any]:
        return {"waypoints": [list(w.as_tuple()) for w in self.waypoints]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Path":
        return cls(tuple(Vec3.from_iterable(w) for w in data["waypoints"]))


@dataclass
class SearchStats:
    """
    Bookkeeping of one planning run.

    Attributes:
        nodes_expanded: Expanded grid nodes, tree nodes added, or fitness evaluations
        open_peak: Largest open-list size (A* only)
        wall_time: Seconds spent inside the planner
        iterations: Planner iterations (RRT*, PSO)
        start_snap: Distance from the start to its grid cell center (A*)
        goal_snap: Distance from the goal to its grid cell center (A*)
        cost_history: Best cost per checkpoint (RRT*) or gbest fitness per iteration (PSO)
        expansion_f: f value of every expanded node, in order (A* with record_trace)
    """
    nodes_expanded: int = 0
    open_peak: int = 0
    wall_time: float = 0.0
    iterations: int = 0
    start_snap: float = 0.0
    goal_snap: float = 0.0
    cost_history: List[float] = field(default_factory=list)
    expansion_f: List[float] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def summary(self) -> Dict[str, Any]:
        """Scalar view for reports."""
        return {
            "nodes_expanded": self.nodes_expanded,
            "open_peak": self.open_peak,
            "wall_time": self.wall_time,
            "iterations": self.iterations,
            "start_snap": self.start_snap,
            "goal_snap": self.goal_snap,
            "final_cost": self.cost_history[-1] if self.cost_history else None,
            **self.extra,
        }
