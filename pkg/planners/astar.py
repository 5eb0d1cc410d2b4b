"""
Grid A* over a voxelized city.

The search runs on the 26-connected lattice of an OccupancyGrid with
Euclidean edge costs and the Euclidean distance between cell centers as
heuristic. That heuristic is consistent for this move set, so a node is never
reopened once closed and the popped f values are non-decreasing.

Open list entries are keyed on (f, -g, index): equal f prefers the deeper
node, then the lexicographically smaller cell, so runs are deterministic.
"""

import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from city.city_map import CityMap, is_point_free, is_segment_free, segments_free
from city.geometry import Vec3
from city.occupancy import DEFAULT_CELL_BUDGET, DEFAULT_RESOLUTION, GridIndex, OccupancyGrid, voxelize

from .common import GoalBlockedError, NoPathError, Path, PlannerError, SearchStats, StartBlockedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AstarConfig:
    """
    A* parameters.

    Attributes:
        resolution: Voxel edge length in meters
        allow_corner_cutting: Permit diagonal moves past occupied cells of the
            spanned sub-cube
        cell_budget: Largest lattice voxelize may build
        snap_radius_cells: Search half-width when snapping continuous endpoints
        merge_collinear: Drop interior waypoints that continue straight on
        shortcut: Replace grid runs by the longest free straight segments
        record_trace: Keep the f value of every expansion in SearchStats
    """
    resolution: float = DEFAULT_RESOLUTION
    allow_corner_cutting: bool = False
    cell_budget: int = DEFAULT_CELL_BUDGET
    snap_radius_cells: int = 2
    merge_collinear: bool = True
    shortcut: bool = True
    record_trace: bool = False

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError(f"resolution must be > 0, got {self.resolution}")
        if self.cell_budget < 1:
            raise ValueError("cell_budget must be >= 1")
        if self.snap_radius_cells < 0:
            raise ValueError("snap_radius_cells must be >= 0")


@dataclass
class SearchNode:
    """Open-list record; f is always g + h."""
    index: GridIndex
    g: float
    h: float
    parent: Optional[GridIndex] = None

    @property
    def f(self) -> float:
        return self.g + self.h


def _build_moves():
    moves = []
    for di, dj, dk in itertools.product((-1, 0, 1), repeat=3):
        if (di, dj, dk) == (0, 0, 0):
            continue
        # Cells of the sub-cube spanned by the move, excluding origin and target
        between = [
            (a, b, c)
            for a in sorted({0, di}) for b in sorted({0, dj}) for c in sorted({0, dk})
            if (a, b, c) not in ((0, 0, 0), (di, dj, dk))
        ]
        moves.append(((di, dj, dk), math.sqrt(abs(di) + abs(dj) + abs(dk)), tuple(between)))
    return tuple(moves)


MOVES = _build_moves()


def heuristic(a: GridIndex, b: GridIndex, resolution: float) -> float:
    """Straight-line distance between the centers of two cells."""
    di = (b[0] - a[0]) * resolution
    dj = (b[1] - a[1]) * resolution
    dk = (b[2] - a[2]) * resolution
    return math.sqrt(di * di + dj * dj + dk * dk)


def plan_astar(grid: OccupancyGrid, start: GridIndex, goal: GridIndex,
               config: Optional[AstarConfig] = None) -> Tuple[Path, SearchStats]:
    """
    A* from the start cell to the goal cell.

    Args:
        grid: Occupancy lattice
        start: Start cell
        goal: Goal cell
        config: Search options; resolution is taken from the grid

    Returns:
        Path through cell centers (start to goal) and SearchStats; the optimal
        grid cost is in stats.cost_history[-1]

    Raises:
        StartBlockedError: Start cell occupied or outside the grid
        GoalBlockedError: Goal cell occupied or outside the grid
        NoPathError: Open list exhausted
    """
    config = config or AstarConfig(resolution=grid.resolution)
    t0 = time.perf_counter()
    start, goal = GridIndex(*start), GridIndex(*goal)
    if not grid.is_free(start):
        raise StartBlockedError(f"start cell {tuple(start)} is blocked")
    if not grid.is_free(goal):
        raise GoalBlockedError(f"goal cell {tuple(goal)} is blocked")

    nx, ny, nz = grid.dims
    res = grid.resolution
    occupied = grid.occupancy.ravel().tolist()
    closed = bytearray(nx * ny * nz)
    best_g: Dict[int, float] = {}
    nodes: Dict[int, SearchNode] = {}
    stats = SearchStats()

    def flat(i, j, k):
        return (i * ny + j) * nz + k

    root = SearchNode(start, 0.0, heuristic(start, goal, res))
    best_g[flat(*start)] = 0.0
    nodes[flat(*start)] = root
    open_heap = [(root.f, -root.g, start)]
    stats.open_peak = 1

    while open_heap:
        f, neg_g, idx = heapq.heappop(open_heap)
        cur = flat(*idx)
        if closed[cur]:
            continue
        closed[cur] = 1
        stats.nodes_expanded += 1
        if config.record_trace:
            stats.expansion_f.append(f)

        if idx == goal:
            path = _reconstruct(grid, nodes, flat, goal)
            stats.cost_history.append(-neg_g)
            stats.wall_time = time.perf_counter() - t0
            return path, stats

        g = -neg_g
        i, j, k = idx
        for (di, dj, dk), step, between in MOVES:
            ni, nj, nk = i + di, j + dj, k + dk
            if not (0 <= ni < nx and 0 <= nj < ny and 0 <= nk < nz):
                continue
            nflat = flat(ni, nj, nk)
            if closed[nflat] or occupied[nflat]:
                continue
            if not config.allow_corner_cutting and any(
                occupied[flat(i + a, j + b, k + c)] for a, b, c in between
            ):
                continue
            ng = g + step * res
            if ng < best_g.get(nflat, math.inf):
                best_g[nflat] = ng
                nidx = GridIndex(ni, nj, nk)
                node = SearchNode(nidx, ng, heuristic(nidx, goal, res), idx)
                nodes[nflat] = node
                heapq.heappush(open_heap, (node.f, -ng, nidx))
        if len(open_heap) > stats.open_peak:
            stats.open_peak = len(open_heap)

    stats.wall_time = time.perf_counter() - t0
    raise NoPathError(
        f"open list exhausted after {stats.nodes_expanded} expansions without reaching {tuple(goal)}"
    )


def _reconstruct(grid: OccupancyGrid, nodes: Dict[int, SearchNode], flat, goal: GridIndex) -> Path:
    # goal -> start, then reversed
    cells: List[GridIndex] = []
    node: Optional[SearchNode] = nodes[flat(*goal)]
    while node is not None:
        cells.append(node.index)
        node = nodes[flat(*node.parent)] if node.parent is not None else None
    cells.reverse()
    return Path(tuple(grid.cell_center(c) for c in cells))


# ------------------------------------------------------------------ #
#   Continuous-space wrapper
# ------------------------------------------------------------------ #

def plan_astar_world(city: CityMap, start: Vec3, goal: Vec3,
                     config: Optional[AstarConfig] = None) -> Tuple[Path, SearchStats]:
    """
    Plan between continuous endpoints on a freshly voxelized map.

    Each endpoint snaps to the nearest free cell center it can reach with a
    collision-free segment; the true endpoints are then attached to the grid
    path so the result starts at `start` and ends at `goal`. With
    config.shortcut the staircase is then straightened by `shortcut`; sharp
    turns that survive are left for validate to flag.

    Args:
        city: Map to plan in
        start: Start position
        goal: Goal position
        config: Search options

    Raises:
        StartBlockedError / GoalBlockedError: Endpoint not free or no reachable cell
        NoPathError: Grid search failed
        PlannerError: The grid path clips an inflated obstacle (resolution too
            coarse for the obstacle sizes)
    """
    config = config or AstarConfig()
    t0 = time.perf_counter()
    grid = voxelize(city, config.resolution, config.cell_budget)

    start_cell, start_snap = _snap(grid, city, start, config.snap_radius_cells, StartBlockedError, "start")
    goal_cell, goal_snap = _snap(grid, city, goal, config.snap_radius_cells, GoalBlockedError, "goal")

    grid_path, stats = plan_astar(grid, start_cell, goal_cell, config)
    points = [start, *grid_path.waypoints, goal]
    path = Path.from_points(points)
    if config.merge_collinear:
        path = merge_collinear(path)

    for a, b in path.segments():
        if not is_segment_free(city, a, b):
            raise PlannerError(
                f"grid segment {a.as_tuple()} -> {b.as_tuple()} is not free at "
                f"resolution {config.resolution} m"
            )
    if config.shortcut:
        grid_waypoints = len(path)
        path = shortcut(path, city)
        stats.extra["grid_waypoints"] = grid_waypoints

    stats.start_snap = start_snap
    stats.goal_snap = goal_snap
    stats.extra["grid_dims"] = grid.dims
    stats.wall_time = time.perf_counter() - t0
    logger.debug("A* %d expansions, %d waypoints, %.4fs", stats.nodes_expanded, len(path), stats.wall_time)
    return path, stats


def _snap(grid: OccupancyGrid, city: CityMap, p: Vec3, radius: int, error, which: str):
    if not is_point_free(city, p):
        raise error(f"{which} {p.as_tuple()} is not free")
    for idx in grid.cells_near(p, radius):
        center = grid.cell_center(idx)
        if is_segment_free(city, p, center):
            return idx, center.distance_to(p)
    raise error(f"no free grid cell reachable from {which} {p.as_tuple()} within {radius} cells")


def merge_collinear(path: Path, tol: float = 1e-9) -> Path:
    """Remove interior waypoints where the path continues in the same direction."""
    pts = list(path.waypoints)
    if len(pts) < 3:
        return path
    kept = [pts[0]]
    for i in range(1, len(pts) - 1):
        a = _sub(pts[i], kept[-1])
        b = _sub(pts[i + 1], pts[i])
        cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        na, nb = math.sqrt(_dot(a, a)), math.sqrt(_dot(b, b))
        if math.sqrt(_dot(cross, cross)) <= tol * na * nb and _dot(a, b) > 0:
            continue
        kept.append(pts[i])
    kept.append(pts[-1])
    return Path(tuple(kept))


def shortcut(path: Path, city: CityMap) -> Path:
    """
    Greedy line-of-sight smoothing.

    From each kept waypoint, jump to the farthest later waypoint joined to it
    by a free straight segment. Consecutive waypoints of the input must be
    joined by free segments; the result is never longer than the input.
    """
    pts = list(path.waypoints)
    n = len(pts)
    if n < 3:
        return path
    coords = path.as_array()
    kept = [0]
    i = 0
    while i < n - 1:
        later = np.arange(n - 1, i, -1)
        free = segments_free(city, np.repeat(coords[i : i + 1], len(later), axis=0), coords[later])
        # farthest free target; i + 1 is free by precondition
        i = int(later[np.argmax(free)]) if free.any() else i + 1
        kept.append(i)
    return Path(tuple(pts[k] for k in kept))


def _sub(p: Vec3, q: Vec3):
    return (p.x - q.x, p.y - q.y, p.z - q.z)


def _dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
