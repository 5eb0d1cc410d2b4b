"""
Command-line configuration: dotted `section.field=value` overrides and
output directory resolution.
"""

import dataclasses
import json
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from city.schema_validator import ScenarioValidator, validate_planner_settings
from city.scenario import ScenarioSpec
from city.serialization import read_json
from evaluation.constraints import ConstraintSet
from planners.astar import AstarConfig
from planners.pso import PsoConfig
from planners.registry import PlannerSettings
from planners.rrt_star import RrtConfig

OUTPUT_ENV = "SKYBENCH_OUT"
DEFAULT_OUTPUT_DIR = "skybench_out"

Override = Tuple[str, str, Any]


def _fields(cls) -> List[str]:
    return [f.name for f in dataclasses.fields(cls) if f.init]


OVERRIDE_TARGETS: Dict[str, List[str]] = {
    "scenario": _fields(ScenarioSpec),
    "astar": _fields(AstarConfig),
    "rrtstar": _fields(RrtConfig),
    "pso": _fields(PsoConfig),
    "constraints": _fields(ConstraintSet),
}


def parse_override(text: str) -> Override:
    """
    Split `section.field=value`; the value is read as JSON, falling back to the raw string.

    Raises:
        ValueError: Malformed text, unknown section or unknown field
    """
    key, sep, raw = text.partition("=")
    section, dot, name = key.strip().partition(".")
    if not sep or not dot or not name:
        raise ValueError(f"override '{text}' must look like section.field=value")
    if section not in OVERRIDE_TARGETS:
        raise ValueError(f"unknown override section '{section}' (choose from {', '.join(OVERRIDE_TARGETS)})")
    if name not in OVERRIDE_TARGETS[section]:
        raise ValueError(f"unknown field '{name}' in section '{section}'")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return section, name, value


def parse_overrides(texts: Iterable[str]) -> List[Override]:
    return [parse_override(t) for t in texts]


def section_overrides(overrides: Iterable[Override], section: str) -> Dict[str, Any]:
    """Later overrides of the same field win."""
    return {name: value for s, name, value in overrides if s == section}


def load_scenario(path: Path, overrides: Iterable[Override] = ()) -> ScenarioSpec:
    """
    Read a scenario file, apply `scenario.*` overrides, then validate.

    Raises:
        OSError: File unreadable
        ScenarioValidationError: Schema or business-rule violations
    """
    document = read_json(path)
    if isinstance(document, dict):
        document.update(section_overrides(overrides, "scenario"))
    return ScenarioValidator().load(document)


def load_settings(path: Optional[Path], overrides: Iterable[Override] = (),
                  seed: Optional[int] = None) -> PlannerSettings:
    """
    Planner settings from an optional JSON file, then overrides, then the seed.

    Raises:
        ValueError: Settings document invalid or an override value rejected
    """
    document: Dict[str, Any] = {}
    if path is not None:
        document = read_json(path)
        errors = validate_planner_settings(document)
        if errors:
            raise ValueError("invalid planner settings: " + "; ".join(errors))
    settings = PlannerSettings.from_dict(document)
    for section, name, value in overrides:
        if section in PlannerSettings.SECTIONS:
            settings = settings.with_override(section, name, value)
    if seed is not None:
        settings = settings.with_seed(seed)
    return settings


def load_constraints(scenario: ScenarioSpec, overrides: Iterable[Override] = ()) -> ConstraintSet:
    return ConstraintSet.for_scenario(scenario, **section_overrides(overrides, "constraints"))


def resolve_output_dir(flag: Optional[str]) -> Path:
    """--out flag, then $SKYBENCH_OUT, then ./skybench_out."""
    return Path(flag or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT_DIR)
