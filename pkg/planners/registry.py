"""
Planner registry.

Maps the lowercase planner tokens used on the command line and in result
tables to their config types and entry points, and bundles the three configs
into one PlannerSettings object that can be overridden field by field.
"""

import dataclasses
import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

from city.city_map import CityMap
from city.geometry import Vec3
from evaluation.constraints import ConstraintSet

from .astar import AstarConfig, plan_astar_world
from .common import Path, SearchStats
from .pso import PsoConfig, plan_pso
from .rrt_star import RrtConfig, plan_rrtstar

logger = logging.getLogger(__name__)


class PlannerName(str, enum.Enum):
    ASTAR = "astar"
    RRTSTAR = "rrtstar"
    PSO = "pso"

    @classmethod
    def parse(cls, value: str) -> "PlannerName":
        try:
            return cls(value.strip().lower())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown planner '{value}' (choose from {valid})") from None


def replace_field(config: Any, name: str, value: Any) -> Any:
    """
    Copy of a frozen config dataclass with one field changed.

    Raises:
        ValueError: No such field, or the new value breaks the config's invariants
    """
    names = {f.name for f in dataclasses.fields(config) if f.init}
    if name not in names:
        raise ValueError(f"{type(config).__name__} has no field '{name}' (fields: {', '.join(sorted(names))})")
    current = getattr(config, name)
    if isinstance(current, tuple) and isinstance(value, list):
        value = tuple(value)
    elif isinstance(current, float) and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    try:
        return dataclasses.replace(config, **{name: value})
    except TypeError as e:
        raise ValueError(f"bad value for {name}: {e}") from e


@dataclass(frozen=True)
class PlannerSettings:
    """Configs of all three planners."""
    astar: AstarConfig = field(default_factory=AstarConfig)
    rrtstar: RrtConfig = field(default_factory=RrtConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)

    SECTIONS = ("astar", "rrtstar", "pso")

    def with_override(self, section: str, name: str, value: Any) -> "PlannerSettings":
        if section not in self.SECTIONS:
            raise ValueError(f"unknown planner section '{section}'")
        return dataclasses.replace(self, **{section: replace_field(getattr(self, section), name, value)})

    def with_seed(self, seed: int) -> "PlannerSettings":
        """Same settings with both stochastic planners reseeded."""
        return dataclasses.replace(
            self,
            rrtstar=dataclasses.replace(self.rrtstar, seed=seed),
            pso=dataclasses.replace(self.pso, seed=seed),
        )

    def for_planner(self, planner: PlannerName):
        return getattr(self, PlannerName(planner).value)

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Mapping[str, Any]]]) -> "PlannerSettings":
        settings = cls()
        for section, values in (data or {}).items():
            for name, value in values.items():
                settings = settings.with_override(section, name, value)
        return settings

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {s: dataclasses.asdict(getattr(self, s)) for s in self.SECTIONS}


def run_planner(planner: PlannerName, city: CityMap, start: Vec3, goal: Vec3,
                settings: Optional[PlannerSettings] = None,
                constraints: Optional[ConstraintSet] = None) -> Tuple[Path, SearchStats]:
    """
    Dispatch one planning call.

    Only PSO consumes the constraints (its fitness penalizes sharp turns and
    range overrun); the other planners are constraint-agnostic searches.
    """
    planner = PlannerName(planner)
    settings = settings or PlannerSettings()
    logger.debug("running %s from %s to %s", planner.value, start.as_tuple(), goal.as_tuple())
    if planner is PlannerName.ASTAR:
        return plan_astar_world(city, start, goal, settings.astar)
    if planner is PlannerName.RRTSTAR:
        return plan_rrtstar(city, start, goal, settings.rrtstar)
    return plan_pso(city, start, goal, settings.pso, constraints)
