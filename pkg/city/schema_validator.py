"""
Schema validation for scenario documents using JSON Schema 2020-12.

This module validates and normalizes scenario files before they become
ScenarioSpec instances, so malformed input is reported as a list of readable
errors instead of a stack trace.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from .errors import ScenarioValidationError
from .scenario import ScenarioSpec
from .serialization import read_json, scenario_from_dict

SCHEMA_ROOT = Path(__file__).parent.parent / "schemas"
SCENARIO_SCHEMA_PATH = SCHEMA_ROOT / "scenario" / "scenario-schema.json"
PLANNER_SCHEMA_PATH = SCHEMA_ROOT / "planner" / "planner-settings-schema.json"


def load_schema(path: Path) -> Dict[str, Any]:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Schema file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in schema file: {e}")


def format_schema_error(error: jsonschema.ValidationError) -> str:
    location = "/".join(str(p) for p in error.absolute_path) or "root"
    return f"{location}: {error.message}"


class ScenarioValidator:
    """
    Validates and normalizes scenario documents.

    Provides:
    - Schema validation against the scenario JSON Schema
    - Business rules the schema cannot express (altitude delta, endpoints in bounds)
    - Defaults for optional fields
    """

    def __init__(self, schema_path: Optional[Path] = None):
        self.schema = load_schema(schema_path or SCENARIO_SCHEMA_PATH)
        self._validator = jsonschema.Draft202012Validator(self.schema)

    def validate_and_normalize(self, document: Dict[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
        """
        Validate a document and return its normalized form with any errors.

        Args:
            document: Raw scenario dictionary

        Returns:
            Tuple of (normalized_document, error_list)
        """
        if not isinstance(document, dict):
            return document, [f"root: expected an object, got {type(document).__name__}"]

        normalized = self._apply_defaults(dict(document))
        errors = [
            format_schema_error(e)
            for e in sorted(self._validator.iter_errors(normalized), key=lambda e: list(e.absolute_path))
        ]
        if errors:
            return normalized, errors

        errors.extend(self._validate_business_rules(normalized))
        return normalized, errors

    def _apply_defaults(self, document: Dict[str, Any]) -> Dict[str, Any]:
        props = self.schema.get("properties", {})
        for name, prop in props.items():
            if name not in document and "default" in prop:
                document[name] = prop["default"]
        return document

    def _validate_business_rules(self, document: Dict[str, Any]) -> List[str]:
        try:
            scenario_from_dict(document)
        except ScenarioValidationError as e:
            return list(e.errors)
        except ValueError as e:
            return [str(e)]
        return []

    def load(self, source: Union[str, Path, Dict[str, Any]]) -> ScenarioSpec:
        """
        Read, validate and build a ScenarioSpec.

        Raises:
            ScenarioValidationError: Schema or business-rule violations
        """
        document = read_json(source) if isinstance(source, (str, Path)) else source
        normalized, errors = self.validate_and_normalize(document)
        if errors:
            raise ScenarioValidationError(errors)
        return scenario_from_dict(normalized)


def validate_planner_settings(document: Dict[str, Any]) -> List[str]:
    """Schema errors for a planner settings document (empty list when valid)."""
    validator = jsonschema.Draft202012Validator(load_schema(PLANNER_SCHEMA_PATH))
    return [format_schema_error(e) for e in validator.iter_errors(document)]
