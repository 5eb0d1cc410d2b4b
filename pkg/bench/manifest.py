"""
Benchmark manifest: the plan that produced a result directory plus one
representative trial per scenario (its city and the feasible paths), so
figures can be re-emitted later without re-planning.
"""

from pathlib import Path as FilePath
from typing import Any, Dict, Union

from city.errors import CityError
from city.serialization import city_from_dict, city_to_dict, read_json, scenario_from_dict, scenario_to_dict, write_json
from planners.common import Path
from planners.registry import PlannerName

from .experiment_plan import ExperimentPlan, scenario_for_trial
from .figures import ScenarioMap
from .runner import ResultTable, trial_city

MANIFEST_FILE = "manifest.json"
REPRESENTATIVE_TRIAL = 0


def build_manifest(plan: ExperimentPlan, table: ResultTable) -> Dict[str, Any]:
    scenes = {}
    for nominal in plan.scenarios:
        scenario = scenario_for_trial(nominal, plan.base_seed, REPRESENTATIVE_TRIAL)
        paths = {
            r.planner.value: r.path.to_dict()
            for r in table.rows
            if r.scenario_id == nominal.scenario_id and r.trial == REPRESENTATIVE_TRIAL
            and r.feasible and r.path is not None
        }
        try:
            city = city_to_dict(trial_city(scenario, plan.generator))
        except CityError:
            city = None
        scenes[str(nominal.scenario_id)] = {
            "trial": REPRESENTATIVE_TRIAL,
            "scenario": scenario_to_dict(scenario),
            "city": city,
            "paths": paths,
        }
    return {"plan": plan.to_dict(), "scenes": scenes}


def scenes_from_manifest(manifest: Dict[str, Any]) -> Dict[int, ScenarioMap]:
    """Scenario figures recorded in a manifest (scenes whose city failed are skipped)."""
    scenes = {}
    for key, entry in manifest.get("scenes", {}).items():
        if entry.get("city") is None:
            continue
        scenario = scenario_from_dict(entry["scenario"])
        scenes[int(key)] = ScenarioMap(
            scenario_id=int(key),
            city=city_from_dict(entry["city"]),
            start=scenario.start,
            goal=scenario.goal,
            paths={PlannerName(p): Path.from_dict(d) for p, d in entry.get("paths", {}).items()},
        )
    return scenes


def write_manifest(manifest: Dict[str, Any], output_dir: Union[str, FilePath]) -> FilePath:
    return write_json(manifest, FilePath(output_dir) / MANIFEST_FILE)


def read_manifest(output_dir: Union[str, FilePath]) -> Dict[str, Any]:
    return read_json(FilePath(output_dir) / MANIFEST_FILE)
