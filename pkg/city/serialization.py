"""
JSON encoding of scenarios and city maps.

Scenario documents use the ScenarioSpec field names unchanged; vectors are
3-element arrays and map_size is a 2-element array.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Union

from .city_map import CityMap
from .geometry import BoxObstacle, Vec3
from .scenario import ScenarioSpec


def scenario_to_dict(spec: ScenarioSpec) -> Dict[str, Any]:
    return {
        "scenario_id": spec.scenario_id,
        "map_size": list(spec.map_size),
        "obstacle_density": spec.obstacle_density,
        "max_building_height": spec.max_building_height,
        "start": list(spec.start.as_tuple()),
        "goal": list(spec.goal.as_tuple()),
        "max_range": spec.max_range,
        "max_altitude_delta": spec.max_altitude_delta,
        "seed": spec.seed,
    }


def scenario_from_dict(data: Dict[str, Any]) -> ScenarioSpec:
    """Build a ScenarioSpec from an already schema-validated document."""
    return ScenarioSpec(
        scenario_id=int(data["scenario_id"]),
        map_size=tuple(float(v) for v in data["map_size"]),
        obstacle_density=float(data["obstacle_density"]),
        max_building_height=float(data["max_building_height"]),
        start=Vec3.from_iterable(data["start"]),
        goal=Vec3.from_iterable(data["goal"]),
        max_range=float(data["max_range"]),
        max_altitude_delta=float(data["max_altitude_delta"]),
        seed=int(data["seed"]),
    )


def city_to_dict(city: CityMap) -> Dict[str, Any]:
    return {
        "bounds_min": list(city.bounds_min.as_tuple()),
        "bounds_max": list(city.bounds_max.as_tuple()),
        "safety_margin": city.safety_margin,
        "obstacles": [
            {"min_corner": list(b.min_corner.as_tuple()), "max_corner": list(b.max_corner.as_tuple())}
            for b in city.obstacles
        ],
    }


def city_from_dict(data: Dict[str, Any]) -> CityMap:
    return CityMap(
        bounds_min=Vec3.from_iterable(data["bounds_min"]),
        bounds_max=Vec3.from_iterable(data["bounds_max"]),
        obstacles=tuple(
            BoxObstacle(Vec3.from_iterable(o["min_corner"]), Vec3.from_iterable(o["max_corner"]))
            for o in data.get("obstacles", [])
        ),
        safety_margin=float(data.get("safety_margin", 1.0)),
    )


def json_safe(value: Any) -> Any:
    """Replace NaN and infinities (which JSON cannot carry) with None, recursively."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def write_json(data: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Write a JSON document with stable key order and a trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(json_safe(data), f, allow_nan=False, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
