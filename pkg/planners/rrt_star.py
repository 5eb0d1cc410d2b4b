"""
RRT* in continuous space.

Goal-biased sampling, steering by a fixed step, choose-parent among the nodes
within a fixed neighbor radius, and rewiring that pushes cost drops down to
every descendant immediately, so cost-to-come is consistent after every call.
Nearest and near queries are linear scans over a numpy position array.
"""

import enum
import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from city.city_map import CityMap, is_point_free, is_segment_free, segments_free
from city.geometry import Vec3

from .common import GoalBlockedError, NoPathError, Path, SearchStats, StartBlockedError

logger = logging.getLogger(__name__)

COST_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RrtConfig:
    """
    RRT* parameters.

    Attributes:
        goal_bias: Probability of sampling the goal itself
        step_size: Longest edge added by one extension, meters
        neighbor_radius: Fixed choose-parent / rewire radius, meters
        max_iterations: Sampling iterations per run
        goal_tolerance: Nodes this close to the goal may connect to it
        seed: Seed of the sampling generator
        checkpoint_interval: Iterations between best-cost records
        max_sample_attempts: Rejection draws before the last draw is used as is
    """
    goal_bias: float = 0.5
    step_size: float = 25.0
    neighbor_radius: float = 50.0
    max_iterations: int = 5000
    goal_tolerance: float = 10.0
    seed: int = 0
    checkpoint_interval: int = 100
    max_sample_attempts: int = 1000

    def __post_init__(self):
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValueError(f"goal_bias must be in [0, 1], got {self.goal_bias}")
        if not self.step_size > 0:
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if self.neighbor_radius < self.step_size:
            raise ValueError("neighbor_radius must be >= step_size")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.goal_tolerance < 0:
            raise ValueError("goal_tolerance must be >= 0")
        if self.checkpoint_interval < 1 or self.max_sample_attempts < 1:
            raise ValueError("checkpoint_interval and max_sample_attempts must be >= 1")


@dataclass(frozen=True)
class TreeNode:
    """Read-only view of one tree node."""
    node_id: int
    position: Vec3
    parent: Optional[int]
    cost: float


class RrtTree:
    """
    Search tree rooted at the start.

    Positions and costs live in growable numpy arrays; parent and children
    links are plain lists indexed by node id. Node 0 is the root.
    """

    def __init__(self, root: Vec3, capacity: int = 1024):
        self._pos = np.empty((max(capacity, 1), 3), dtype=float)
        self._cost = np.empty(max(capacity, 1), dtype=float)
        self._pos[0] = root.as_array()
        self._cost[0] = 0.0
        self._size = 1
        self.parent: List[Optional[int]] = [None]
        self.children: List[List[int]] = [[]]

    def __len__(self) -> int:
        return self._size

    @property
    def positions(self) -> np.ndarray:
        return self._pos[: self._size]

    @property
    def costs(self) -> np.ndarray:
        return self._cost[: self._size]

    def position(self, node_id: int) -> Vec3:
        return Vec3.from_iterable(self._pos[node_id])

    def cost(self, node_id: int) -> float:
        return float(self._cost[node_id])

    def node(self, node_id: int) -> TreeNode:
        return TreeNode(node_id, self.position(node_id), self.parent[node_id], self.cost(node_id))

    def edge_length(self, a: int, b: int) -> float:
        return float(np.linalg.norm(self._pos[a] - self._pos[b]))

    def add(self, p: Vec3, parent: int) -> int:
        """Attach a new node under `parent` and return its id."""
        if self._size == self._pos.shape[0]:
            self._pos = np.concatenate([self._pos, np.empty_like(self._pos)])
            self._cost = np.concatenate([self._cost, np.empty_like(self._cost)])
        node_id = self._size
        self._pos[node_id] = p.as_array()
        self._size += 1
        self.parent.append(parent)
        self.children.append([])
        self.children[parent].append(node_id)
        self._cost[node_id] = self._cost[parent] + self.edge_length(parent, node_id)
        return node_id

    def distances(self, p: Vec3) -> np.ndarray:
        diff = self.positions - p.as_array()
        return np.sqrt((diff * diff).sum(axis=1))

    def nearest(self, p: Vec3) -> int:
        """Closest node; argmin returns the first minimum, so the lowest id wins ties."""
        return int(np.argmin(self.distances(p)))

    def near(self, p: Vec3, radius: float) -> np.ndarray:
        """Ids of nodes within radius of p, ascending."""
        return np.flatnonzero(self.distances(p) <= radius)

    def is_ancestor(self, candidate: int, node_id: int) -> bool:
        """True if candidate lies on the root path of node_id (a node is its own ancestor)."""
        cur: Optional[int] = node_id
        while cur is not None:
            if cur == candidate:
                return True
            cur = self.parent[cur]
        return False

    def rewire(self, node_id: int, new_parent: int) -> None:
        """
        Re-parent node_id and propagate the cost change to its subtree.

        Raises:
            ValueError: new_parent is node_id or one of its descendants
        """
        if self.is_ancestor(node_id, new_parent):
            raise ValueError(f"rewiring {node_id} under {new_parent} would create a cycle")
        old = self.parent[node_id]
        if old is not None:
            self.children[old].remove(node_id)
        self.parent[node_id] = new_parent
        self.children[new_parent].append(node_id)

        stack = [node_id]
        while stack:
            n = stack.pop()
            self._cost[n] = self._cost[self.parent[n]] + self.edge_length(self.parent[n], n)
            stack.extend(self.children[n])

    def path_to(self, node_id: int) -> List[Vec3]:
        """Root-to-node waypoint list."""
        chain = []
        cur: Optional[int] = node_id
        while cur is not None:
            chain.append(self.position(cur))
            cur = self.parent[cur]
        chain.reverse()
        return chain

    def validate(self, city: Optional[CityMap] = None) -> List[str]:
        """
        Check tree invariants.

        Returns:
            Human-readable violations; empty when the tree is sound
        """
        problems = []
        if self.parent[0] is not None or self._cost[0] != 0.0:
            problems.append("root must have no parent and cost 0")
        for n in range(1, self._size):
            p = self.parent[n]
            if p is None:
                problems.append(f"node {n} has no parent")
                continue
            if n not in self.children[p]:
                problems.append(f"node {n} missing from children of {p}")
            expected = self._cost[p] + self.edge_length(p, n)
            if abs(self._cost[n] - expected) >= COST_TOLERANCE:
                problems.append(f"node {n} cost {self._cost[n]} != {expected}")
            steps, cur = 0, n
            while cur is not None and steps <= self._size:
                cur = self.parent[cur]
                steps += 1
            if cur is not None:
                problems.append(f"node {n} is on a cycle")
            if city is not None and not is_segment_free(city, self.position(p), self.position(n)):
                problems.append(f"edge {p} -> {n} is not free")
        return problems


# ------------------------------------------------------------------ #
#   Primitives
# ------------------------------------------------------------------ #

def sample_point(city: CityMap, goal: Vec3, config: RrtConfig, rng: np.random.Generator) -> Vec3:
    """Goal with probability goal_bias, otherwise a uniform free point in the bounds."""
    if rng.random() < config.goal_bias:
        return goal
    lo, hi = city.bounds_arrays()
    p = Vec3.from_iterable(rng.uniform(lo, hi))
    for _ in range(config.max_sample_attempts - 1):
        if is_point_free(city, p):
            return p
        p = Vec3.from_iterable(rng.uniform(lo, hi))
    return p


def nearest(tree: RrtTree, p: Vec3) -> int:
    return tree.nearest(p)


def steer(origin: Vec3, target: Vec3, step_size: float) -> Vec3:
    """
    Move from origin toward target by at most step_size.

    Raises:
        ValueError: origin and target coincide
    """
    d = origin.distance_to(target)
    if d == 0.0:
        raise ValueError("steer needs distinct points")
    if d <= step_size:
        return target
    s = step_size / d
    return Vec3(
        origin.x + (target.x - origin.x) * s,
        origin.y + (target.y - origin.y) * s,
        origin.z + (target.z - origin.z) * s,
    )


class ExtendStatus(str, enum.Enum):
    ADDED = "added"
    COLLISION = "collision"
    DUPLICATE = "duplicate"


class ExtendOutcome(NamedTuple):
    status: ExtendStatus
    node_id: Optional[int] = None
    rewired: Tuple[int, ...] = ()


def extend(tree: RrtTree, city: CityMap, sample: Vec3, config: RrtConfig) -> ExtendOutcome:
    """
    One RRT* extension toward sample.

    Collisions and samples already in the tree are no-ops reported through
    the outcome status.
    """
    near_id = tree.nearest(sample)
    origin = tree.position(near_id)
    if origin == sample:
        return ExtendOutcome(ExtendStatus.DUPLICATE)
    new = steer(origin, sample, config.step_size)
    if not is_segment_free(city, origin, new):
        return ExtendOutcome(ExtendStatus.COLLISION)
    if float(tree.distances(new).min()) == 0.0:
        return ExtendOutcome(ExtendStatus.DUPLICATE)

    near_ids = tree.near(new, config.neighbor_radius)
    new_arr = new.as_array()
    near_pos = tree.positions[near_ids]
    edge = np.sqrt(((near_pos - new_arr) ** 2).sum(axis=1))
    via = tree.costs[near_ids] + edge

    # choose-parent: cheapest cost-to-come through a free edge, lowest id on ties
    inbound_free = segments_free(city, near_pos, np.broadcast_to(new_arr, near_pos.shape))
    parent = near_id
    best = math.inf
    for idx in np.lexsort((near_ids, via)):
        if inbound_free[idx] or near_ids[idx] == near_id:
            parent, best = int(near_ids[idx]), float(via[idx])
            break
    new_id = tree.add(new, parent)
    logger.debug("node %d under %d cost %.3f (via %.3f)", new_id, parent, tree.cost(new_id), best)

    outbound_free = segments_free(city, np.broadcast_to(new_arr, near_pos.shape), near_pos)
    new_cost = tree.cost(new_id)
    rewired = []
    for idx, n in enumerate(near_ids):
        n = int(n)
        if n == parent or not outbound_free[idx]:
            continue
        # same formula rewire stores, so an accepted rewire strictly lowers cost(n)
        if new_cost + tree.edge_length(new_id, n) < tree.cost(n) and not tree.is_ancestor(n, new_id):
            tree.rewire(n, new_id)
            new_cost = tree.cost(new_id)
            rewired.append(n)
    return ExtendOutcome(ExtendStatus.ADDED, new_id, tuple(rewired))


def best_goal_connection(tree: RrtTree, city: CityMap, goal: Vec3,
                         tolerance: float) -> Tuple[Optional[int], float]:
    """
    Node with the cheapest collision-free connection to the goal.

    Returns:
        (node id, total cost) or (None, inf) when no node is within tolerance
    """
    ids = tree.near(goal, tolerance)
    if ids.size == 0:
        return None, math.inf
    pos = tree.positions[ids]
    goal_arr = goal.as_array()
    free = segments_free(city, pos, np.broadcast_to(goal_arr, pos.shape))
    totals = tree.costs[ids] + np.sqrt(((pos - goal_arr) ** 2).sum(axis=1))
    totals = np.where(free, totals, np.inf)
    k = int(np.argmin(totals))
    if not np.isfinite(totals[k]):
        return None, math.inf
    return int(ids[k]), float(totals[k])


def plan_rrtstar(city: CityMap, start: Vec3, goal: Vec3,
                 config: Optional[RrtConfig] = None) -> Tuple[Path, SearchStats]:
    """
    Grow an RRT* tree for max_iterations and return the cheapest goal connection.

    Args:
        city: Map to plan in
        start: Root of the tree
        goal: Target position
        config: Planner parameters (seeded, so runs are reproducible)

    Returns:
        (Path ending exactly at goal, SearchStats with best cost per checkpoint)

    Raises:
        StartBlockedError / GoalBlockedError: Endpoint not free
        NoPathError: No node reached goal_tolerance with a free final edge
    """
    config = config or RrtConfig()
    if not is_point_free(city, start):
        raise StartBlockedError(f"start {start.as_tuple()} is not free")
    if not is_point_free(city, goal):
        raise GoalBlockedError(f"goal {goal.as_tuple()} is not free")

    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    tree = RrtTree(start)
    stats = SearchStats()
    collisions = rewires = 0

    for it in range(1, config.max_iterations + 1):
        sample = sample_point(city, goal, config, rng)
        outcome = extend(tree, city, sample, config)
        if outcome.status is ExtendStatus.COLLISION:
            collisions += 1
        rewires += len(outcome.rewired)
        if it % config.checkpoint_interval == 0:
            _, best = best_goal_connection(tree, city, goal, config.goal_tolerance)
            stats.cost_history.append(best)

    node_id, best = best_goal_connection(tree, city, goal, config.goal_tolerance)
    stats.iterations = config.max_iterations
    stats.nodes_expanded = len(tree)
    stats.extra.update({"collisions": collisions, "rewires": rewires})
    stats.wall_time = time.perf_counter() - t0
    if node_id is None:
        raise NoPathError(
            f"no tree node within {config.goal_tolerance} m of the goal after {config.max_iterations} iterations"
        )

    # A node sitting exactly on the goal is reused rather than duplicated
    points = tree.path_to(node_id)
    if points[-1] != goal:
        points.append(goal)
    path = Path.from_points(points)
    logger.debug("RRT* %d nodes, best cost %.3f, %.4fs", len(tree), best, stats.wall_time)
    return path, stats
