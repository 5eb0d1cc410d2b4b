"""
Particle swarm optimization over fixed-length waypoint encodings.

A particle position is K interior waypoints flattened to a vector of length
3K. Decoding clamps each waypoint to the map bounds and brackets them with
the start and goal. Fitness is the path length plus additive penalties for
colliding segments, sharp turns and range overrun, scaled far apart so
feasibility dominates length.

The swarm update is synchronous: every particle moves and is evaluated, then
the global best is refreshed once per iteration.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from city.city_map import CityMap, is_point_free, segments_free
from city.geometry import Vec3
from evaluation.constraints import ConstraintSet

from .common import GoalBlockedError, NoFeasiblePathError, Path, SearchStats, StartBlockedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoConfig:
    """
    PSO parameters.

    Attributes:
        population: Swarm size
        iterations: Full swarm updates per run
        c1: Self-learning factor
        c2: Social learning factor
        inertia: Weight of the previous velocity
        v_max: Per-dimension speed limit; None means 10% of the map diagonal
        waypoints: Interior waypoint count K
        seed: Seed of the swarm generator
        penalty_collision: Added per colliding segment
        penalty_turn: Added per vertex sharper than the turn limit
        penalty_range: Added per meter beyond the flying range
    """
    population: int = 150
    iterations: int = 200
    c1: float = 1.9
    c2: float = 1.9
    inertia: float = 0.7
    v_max: Optional[float] = None
    waypoints: int = 5
    seed: int = 0
    penalty_collision: float = 1e4
    penalty_turn: float = 1e2
    penalty_range: float = 10.0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("c1 and c2 must be >= 0")
        if not 0 < self.inertia <= 1:
            raise ValueError(f"inertia must be in (0, 1], got {self.inertia}")
        if self.waypoints < 1:
            raise ValueError("waypoints must be >= 1")
        if self.v_max is not None and not self.v_max > 0:
            raise ValueError("v_max must be > 0 when set")
        if min(self.penalty_collision, self.penalty_turn, self.penalty_range) < 0:
            raise ValueError("penalties must be >= 0")

    @property
    def dimension(self) -> int:
        return 3 * self.waypoints


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float = math.inf


@dataclass
class SwarmState:
    particles: List[Particle]
    gbest_position: np.ndarray
    gbest_fitness: float
    iteration: int = 0
    history: List[float] = field(default_factory=list)


class FitnessTerms(NamedTuple):
    """Breakdown of one fitness value."""
    length: float
    collisions: int
    sharp_turns: int
    range_excess: float
    total: float


# ------------------------------------------------------------------ #
#   Encoding and fitness
# ------------------------------------------------------------------ #

def _decode_points(position: np.ndarray, start: Vec3, goal: Vec3, city: CityMap) -> np.ndarray:
    lo, hi = city.bounds_arrays()
    interior = np.clip(np.asarray(position, dtype=float).reshape(-1, 3), lo, hi)
    pts = np.vstack([start.as_array(), interior, goal.as_array()])
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    return pts[keep]


def decode(position: np.ndarray, start: Vec3, goal: Vec3, city: CityMap) -> Path:
    """
    Path [start, w1..wK, goal] with every w clamped to the map bounds.

    Consecutive duplicate waypoints (e.g. two clamped to the same corner)
    are dropped.
    """
    return Path.from_array(_decode_points(position, start, goal, city))


def flatten(path: Path) -> np.ndarray:
    """Interior waypoints of a path as a particle position vector."""
    return path.as_array()[1:-1].ravel()


def fitness_terms(points: np.ndarray, city: CityMap, constraints: ConstraintSet,
                  config: Optional[PsoConfig] = None) -> FitnessTerms:
    """
    Evaluate the penalized path score of a waypoint array.

    Args:
        points: (n, 3) waypoints, n >= 2, no consecutive duplicates
        city: Map for the collision term
        constraints: Supplies the turn limit and flying range
        config: Supplies the penalty weights
    """
    config = config or PsoConfig()
    pts = np.asarray(points, dtype=float)
    seg = pts[1:] - pts[:-1]
    seg_len = np.sqrt((seg * seg).sum(axis=1))
    length = math.fsum(seg_len.tolist())

    collisions = int(np.count_nonzero(~segments_free(city, pts[:-1], pts[1:])))

    sharp = 0
    if len(pts) > 2:
        a, b = seg[:-1], seg[1:]
        cos_theta = (a * b).sum(axis=1) / (seg_len[:-1] * seg_len[1:])
        theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
        sharp = int(np.count_nonzero(180.0 - np.degrees(theta) < constraints.sharp_turn_min_angle))

    excess = max(0.0, length - constraints.max_range)
    total = (
        length
        + config.penalty_collision * collisions
        + config.penalty_turn * sharp
        + config.penalty_range * excess
    )
    return FitnessTerms(length, collisions, sharp, excess, total)


def fitness(path: Path, city: CityMap, constraints: ConstraintSet,
            config: Optional[PsoConfig] = None) -> float:
    """Penalized path score; lower is better."""
    return fitness_terms(path.as_array(), city, constraints, config).total


# ------------------------------------------------------------------ #
#   Swarm update
# ------------------------------------------------------------------ #

def update_velocity(particle: Particle, gbest: np.ndarray, config: PsoConfig,
                    r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """
    Inertia plus cognitive and social pulls, clamped to +/- v_max when set.

    r1 and r2 are per-dimension draws in [0, 1]. The particle is not modified.
    """
    x = particle.position
    v = (
        config.inertia * particle.velocity
        + config.c1 * r1 * (particle.pbest_position - x)
        + config.c2 * r2 * (gbest - x)
    )
    if config.v_max is not None:
        v = np.clip(v, -config.v_max, config.v_max)
    return v


def update_position(particle: Particle, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """
    Advance the particle by its velocity and clamp to the bounds.

    Velocity components of clamped dimensions are zeroed. Updates the particle
    in place and returns the new position.
    """
    moved = particle.position + particle.velocity
    clamped = (moved < lower) | (moved > upper)
    particle.position = np.clip(moved, lower, upper)
    if clamped.any():
        particle.velocity = np.where(clamped, 0.0, particle.velocity)
    return particle.position


def straight_line_position(start: Vec3, goal: Vec3, waypoints: int) -> np.ndarray:
    """Evenly spaced interior points on the start-goal segment."""
    s, g = start.as_array(), goal.as_array()
    t = np.arange(1, waypoints + 1, dtype=float)[:, None] / (waypoints + 1)
    return (s + t * (g - s)).ravel()


def init_swarm(city: CityMap, start: Vec3, goal: Vec3, config: PsoConfig,
               rng: np.random.Generator) -> SwarmState:
    """Particle 0 on the straight line, the rest uniform in bounds, all at rest."""
    lo, hi = city.bounds_arrays()
    lower, upper = np.tile(lo, config.waypoints), np.tile(hi, config.waypoints)
    particles = []
    for i in range(config.population):
        pos = straight_line_position(start, goal, config.waypoints) if i == 0 else rng.uniform(lower, upper)
        particles.append(Particle(pos, np.zeros(config.dimension), pos.copy()))
    return SwarmState(particles, particles[0].position.copy(), math.inf)


def plan_pso(city: CityMap, start: Vec3, goal: Vec3, config: Optional[PsoConfig] = None,
             constraints: Optional[ConstraintSet] = None) -> Tuple[Path, SearchStats]:
    """
    Run the swarm for config.iterations updates and decode the global best.

    Args:
        city: Map to plan in
        start: First waypoint
        goal: Last waypoint
        config: Swarm parameters
        constraints: Turn limit and flying range used by the fitness

    Returns:
        (decoded gbest path, SearchStats whose cost_history is gbest fitness per iteration)

    Raises:
        StartBlockedError / GoalBlockedError: Endpoint not free
        NoFeasiblePathError: The best path still has a colliding segment
    """
    config = config or PsoConfig()
    if config.v_max is None:
        config = replace(config, v_max=0.1 * city.diagonal)
    constraints = constraints or ConstraintSet()
    if not is_point_free(city, start):
        raise StartBlockedError(f"start {start.as_tuple()} is not free")
    if not is_point_free(city, goal):
        raise GoalBlockedError(f"goal {goal.as_tuple()} is not free")

    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    lo, hi = city.bounds_arrays()
    lower, upper = np.tile(lo, config.waypoints), np.tile(hi, config.waypoints)

    def evaluate(position: np.ndarray) -> float:
        return fitness_terms(_decode_points(position, start, goal, city), city, constraints, config).total

    swarm = init_swarm(city, start, goal, config, rng)
    for p in swarm.particles:
        p.pbest_fitness = evaluate(p.position)
    _refresh_gbest(swarm)
    stats = SearchStats(nodes_expanded=config.population)

    for _ in range(config.iterations):
        r1 = rng.random((config.population, config.dimension))
        r2 = rng.random((config.population, config.dimension))
        for i, p in enumerate(swarm.particles):
            p.velocity = update_velocity(p, swarm.gbest_position, config, r1[i], r2[i])
            update_position(p, lower, upper)
            f = evaluate(p.position)
            if f < p.pbest_fitness:
                p.pbest_fitness = f
                p.pbest_position = p.position.copy()
        _refresh_gbest(swarm)
        swarm.iteration += 1
        swarm.history.append(swarm.gbest_fitness)
        stats.nodes_expanded += config.population

    stats.iterations = swarm.iteration
    stats.cost_history = list(swarm.history)
    path = decode(swarm.gbest_position, start, goal, city)
    terms = fitness_terms(path.as_array(), city, constraints, config)
    stats.extra.update({"collisions": terms.collisions, "sharp_turns": terms.sharp_turns,
                        "range_excess": terms.range_excess})
    stats.wall_time = time.perf_counter() - t0
    if terms.collisions:
        raise NoFeasiblePathError(
            f"best particle still has {terms.collisions} colliding segment(s) after "
            f"{config.iterations} iterations", path, stats,
        )
    logger.debug("PSO gbest %.3f after %d iterations, %.4fs", swarm.gbest_fitness, swarm.iteration, stats.wall_time)
    return path, stats


def _refresh_gbest(swarm: SwarmState) -> None:
    # Strict improvement keeps the recorded sequence exactly non-increasing
    best = min(range(len(swarm.particles)), key=lambda i: swarm.particles[i].pbest_fitness)
    if swarm.particles[best].pbest_fitness < swarm.gbest_fitness:
        swarm.gbest_fitness = swarm.particles[best].pbest_fitness
        swarm.gbest_position = swarm.particles[best].pbest_position.copy()
