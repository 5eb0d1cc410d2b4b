"""
Path planners: grid A*, continuous RRT* and waypoint PSO, sharing the Path
output type and SearchStats bookkeeping.
"""

from .common import (
    GoalBlockedError,
    NoFeasiblePathError,
    NoPathError,
    Path,
    PlannerError,
    SearchStats,
    StartBlockedError,
)
from .astar import AstarConfig, heuristic, merge_collinear, plan_astar, plan_astar_world, shortcut
from .rrt_star import ExtendOutcome, ExtendStatus, RrtConfig, RrtTree, extend, nearest, plan_rrtstar, sample_point, steer
from .pso import (
    Particle,
    PsoConfig,
    SwarmState,
    decode,
    fitness,
    fitness_terms,
    plan_pso,
    update_position,
    update_velocity,
)
from .registry import PlannerName, PlannerSettings, run_planner

__all__ = [
    "GoalBlockedError",
    "NoFeasiblePathError",
    "NoPathError",
    "Path",
    "PlannerError",
    "SearchStats",
    "StartBlockedError",
    "AstarConfig",
    "heuristic",
    "merge_collinear",
    "plan_astar",
    "plan_astar_world",
    "shortcut",
    "ExtendOutcome",
    "ExtendStatus",
    "RrtConfig",
    "RrtTree",
    "extend",
    "nearest",
    "plan_rrtstar",
    "sample_point",
    "steer",
    "Particle",
    "PsoConfig",
    "SwarmState",
    "decode",
    "fitness",
    "fitness_terms",
    "plan_pso",
    "update_position",
    "update_velocity",
    "PlannerName",
    "PlannerSettings",
    "run_planner",
]
