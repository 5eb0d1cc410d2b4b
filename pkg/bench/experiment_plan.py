"""
Experiment plans: which scenarios, planners and trials a benchmark runs, and
how every stochastic input of a trial is derived from one base seed.
"""

import hashlib
import math
import dataclasses
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from city.generator import GeneratorConfig
from city.geometry import Vec3
from city.scenario import ScenarioSpec
from city.serialization import scenario_from_dict, scenario_to_dict
from planners.registry import PlannerName, PlannerSettings, replace_field

CRUISE_ALTITUDE = 25.0
ENDPOINT_SEPARATION = 0.8
ENDPOINT_BORDER = 5.0
DEFAULT_TRIALS = 10

ENDPOINT_NOTE = (
    "Start and goal are re-sampled per trial: random heading, separation "
    f"{ENDPOINT_SEPARATION:.0%} of max_range, centered on {CRUISE_ALTITUDE:g} m cruise altitude "
    "with the scenario's altitude difference."
)


def trial_seed(base_seed: int, scenario_id: int, planner: str, trial: int) -> int:
    """
    Stable 63-bit seed for one (scenario, planner, trial) cell.

    BLAKE2b over the textual key, so changing one cell's inputs never moves
    another cell's seed and the value is identical across processes.
    """
    key = f"{base_seed}:{scenario_id}:{planner}:{trial}".encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") & (2 ** 63 - 1)


def city_seed(base_seed: int, scenario_id: int, trial: int) -> int:
    """Seed of the city shared by all planners in one trial."""
    return trial_seed(base_seed, scenario_id, "city", trial)


@dataclass(frozen=True)
class ExperimentPlan:
    """
    Attributes:
        scenarios: Nominal scenarios; endpoints and city seed are re-derived per trial
        planners: Planners to compare
        trials_per_cell: Trials per (scenario, planner)
        base_seed: Root of every derived seed
        settings: Planner parameters (seeds are replaced per trial)
        generator: City generator parameters
    """
    scenarios: Tuple[ScenarioSpec, ...]
    planners: Tuple[PlannerName, ...] = tuple(PlannerName)
    trials_per_cell: int = DEFAULT_TRIALS
    base_seed: int = 0
    settings: PlannerSettings = field(default_factory=PlannerSettings)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "planners", tuple(PlannerName(p) for p in self.planners))
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")
        if not self.scenarios:
            raise ValueError("plan needs at least one scenario")
        if not self.planners:
            raise ValueError("plan needs at least one planner")
        ids = [s.scenario_id for s in self.scenarios]
        if len(set(ids)) != len(ids):
            raise ValueError(f"scenario ids must be unique, got {ids}")
        if len(set(self.planners)) != len(self.planners):
            raise ValueError("planners must be unique")

    @property
    def cell_count(self) -> int:
        return len(self.scenarios) * len(self.planners) * self.trials_per_cell

    def scenario(self, scenario_id: int) -> ScenarioSpec:
        for s in self.scenarios:
            if s.scenario_id == scenario_id:
                return s
        raise KeyError(f"scenario {scenario_id} is not in the plan")

    def restrict(self, scenario_ids: Optional[Sequence[int]] = None,
                 planners: Optional[Sequence[PlannerName]] = None,
                 trials: Optional[int] = None) -> "ExperimentPlan":
        """Subset of the plan (unknown scenario ids raise KeyError)."""
        scenarios = self.scenarios
        if scenario_ids:
            scenarios = tuple(self.scenario(i) for i in scenario_ids)
        return replace(
            self,
            scenarios=scenarios,
            planners=tuple(planners) if planners else self.planners,
            trials_per_cell=trials if trials is not None else self.trials_per_cell,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenarios": [scenario_to_dict(s) for s in self.scenarios],
            "planners": [p.value for p in self.planners],
            "trials_per_cell": self.trials_per_cell,
            "base_seed": self.base_seed,
            "settings": self.settings.to_dict(),
            "generator": dataclasses.asdict(self.generator),
            "endpoint_placement": ENDPOINT_NOTE,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentPlan":
        """
        Inverse of to_dict; a missing generator section means the defaults.

        Raises:
            ValueError: Unknown generator field or a value the config rejects
        """
        generator = GeneratorConfig()
        for name, value in (data.get("generator") or {}).items():
            generator = replace_field(generator, name, value)
        return cls(
            scenarios=tuple(scenario_from_dict(s) for s in data["scenarios"]),
            planners=tuple(PlannerName(p) for p in data["planners"]),
            trials_per_cell=int(data["trials_per_cell"]),
            base_seed=int(data["base_seed"]),
            settings=PlannerSettings.from_dict(data.get("settings")),
            generator=generator,
        )


def _nominal(scenario_id: int, size: float, density: float, max_range: float,
             altitude_delta: float, base_seed: int) -> ScenarioSpec:
    # Endpoints centered on the map along +x, separated by 80% of the range
    horizontal = math.sqrt((ENDPOINT_SEPARATION * max_range) ** 2 - altitude_delta ** 2)
    c = size / 2.0
    z0 = CRUISE_ALTITUDE - altitude_delta / 2.0
    return ScenarioSpec(
        scenario_id=scenario_id,
        map_size=(size, size),
        obstacle_density=density,
        max_building_height=100.0,
        start=Vec3(c - horizontal / 2.0, c, z0),
        goal=Vec3(c + horizontal / 2.0, c, z0 + altitude_delta),
        max_range=max_range,
        max_altitude_delta=30.0,
        seed=city_seed(base_seed, scenario_id, 0),
    )


def default_plan(base_seed: int = 0, trials: int = DEFAULT_TRIALS) -> ExperimentPlan:
    """
    The six benchmark scenarios, in pairs varying one factor each.

    1/2: dense (60%) versus sparse (10%) buildings on a 1 km map
    3/4: 2 km map (range 400 m) versus 1 km map (range 200 m)
    5/6: 30 m altitude difference versus level flight
    """
    table = [
        (1, 1000.0, 0.60, 200.0, 0.0),
        (2, 1000.0, 0.10, 200.0, 0.0),
        (3, 2000.0, 0.10, 400.0, 0.0),
        (4, 1000.0, 0.10, 200.0, 0.0),
        (5, 1000.0, 0.10, 200.0, 30.0),
        (6, 1000.0, 0.10, 200.0, 0.0),
    ]
    scenarios = tuple(_nominal(*row, base_seed=base_seed) for row in table)
    return ExperimentPlan(scenarios=scenarios, trials_per_cell=trials, base_seed=base_seed)


def scenario_for_trial(scenario: ScenarioSpec, base_seed: int, trial: int) -> ScenarioSpec:
    """
    Per-trial variant of a nominal scenario.

    The heading and placement of the start-goal pair are drawn from the
    trial's city seed; separation and altitude difference are those of the
    nominal endpoints, and the pair is centered on the cruise altitude.
    """
    seed = city_seed(base_seed, scenario.scenario_id, trial)
    rng = np.random.default_rng(seed)
    dz = scenario.goal.z - scenario.start.z
    separation = scenario.start.distance_to(scenario.goal)
    horizontal = math.sqrt(max(separation ** 2 - dz ** 2, 0.0))

    heading = rng.uniform(0.0, 2.0 * math.pi)
    hx, hy = horizontal / 2.0 * math.cos(heading), horizontal / 2.0 * math.sin(heading)
    w, d = scenario.map_size
    # Center range keeps both endpoints at least ENDPOINT_BORDER inside the map
    cx = rng.uniform(ENDPOINT_BORDER + abs(hx), w - ENDPOINT_BORDER - abs(hx))
    cy = rng.uniform(ENDPOINT_BORDER + abs(hy), d - ENDPOINT_BORDER - abs(hy))
    z0 = CRUISE_ALTITUDE - dz / 2.0
    return replace(
        scenario,
        start=Vec3(cx - hx, cy - hy, z0),
        goal=Vec3(cx + hx, cy + hy, z0 + dz),
        seed=seed,
    )
