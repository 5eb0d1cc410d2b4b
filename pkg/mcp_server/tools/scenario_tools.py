"""
Scenario tools for MCP server: validation, the built-in benchmark scenarios
and city generation.

The work is done by module-level functions so it can be exercised without a
running server; register_scenario_tools only wraps them as MCP tools.
"""

from typing import Any, Dict

from mcp.server.fastmcp import FastMCP

from bench.experiment_plan import ENDPOINT_NOTE, default_plan
from city.errors import CityError
from city.generator import coverage_density, generate_city
from city.schema_validator import ScenarioValidator
from city.serialization import city_to_dict, scenario_to_dict

from ..shared.error_handlers import MCPErrorHandler
from ..shared.response_builders import ResponseBuilder

SCENARIO_QUICK_FIXES = [
    "scenario_id must be an integer 1..6",
    "map_size is [width, depth] in meters",
    "start and goal are [x, y, z] inside [0, width] x [0, depth] x [0, max_building_height]",
    "|goal.z - start.z| must not exceed max_altitude_delta",
]


def validate_scenario_document(scenario: Dict[str, Any]) -> Dict[str, Any]:
    normalized, errors = ScenarioValidator().validate_and_normalize(scenario)
    return ResponseBuilder.validation_response(
        valid=not errors,
        errors=errors,
        suggestions=SCENARIO_QUICK_FIXES if errors else [],
        normalized=normalized if not errors else None,
    )


def list_default_scenarios(base_seed: int = 0) -> Dict[str, Any]:
    plan = default_plan(base_seed=base_seed)
    items = [scenario_to_dict(s) for s in plan.scenarios]
    response = ResponseBuilder.list_response(items)
    response["endpoint_placement"] = ENDPOINT_NOTE
    return response


def generate_city_summary(scenario: Dict[str, Any], include_obstacles: bool = False) -> Dict[str, Any]:
    normalized, errors = ScenarioValidator().validate_and_normalize(scenario)
    if errors:
        return MCPErrorHandler.validation_error(errors, SCENARIO_QUICK_FIXES)
    try:
        spec = ScenarioValidator().load(normalized)
        city = generate_city(spec)
    except CityError as e:
        return MCPErrorHandler.planning_error(
            str(e),
            ["Lower obstacle_density", "Move start/goal away from the map edge"],
            type(e).__name__,
        )
    data = {
        "scenario_id": spec.scenario_id,
        "building_count": len(city.obstacles),
        "coverage": coverage_density(city),
        "target_density": spec.obstacle_density,
    }
    if include_obstacles:
        data["city"] = city_to_dict(city)
    return ResponseBuilder.success_response(data)


def register_scenario_tools(mcp: FastMCP) -> None:
    """Register scenario validation, listing and generation tools."""

    @mcp.tool()
    def validate_scenario(scenario: dict) -> dict:
        """
        Validate a scenario document against the scenario schema and business rules.

        A scenario has scenario_id, map_size [w, d], obstacle_density (0..1),
        max_building_height, start and goal [x, y, z], max_range,
        max_altitude_delta (default 30) and seed.

        Args:
            scenario: Scenario dictionary

        Returns:
            valid flag, error list, suggestions and the normalized document
        """
        try:
            return validate_scenario_document(scenario)
        except Exception as e:
            return MCPErrorHandler.validation_error([f"root: {e}"])

    @mcp.tool()
    def list_scenarios(base_seed: int = 0) -> dict:
        """
        List the six built-in benchmark scenarios.

        Args:
            base_seed: Root seed the city seeds are derived from

        Returns:
            Scenario documents ready for plan_path or generate_city
        """
        return list_default_scenarios(base_seed)

    @mcp.tool()
    def generate_city(scenario: dict, include_obstacles: bool = False) -> dict:
        """
        Generate the city of a scenario and report its buildings and coverage.

        Args:
            scenario: Scenario dictionary
            include_obstacles: Also return every building box

        Returns:
            Building count, achieved coverage and optionally the full city
        """
        try:
            return generate_city_summary(scenario, include_obstacles)
        except Exception as e:
            return MCPErrorHandler.planning_error(str(e), error_type=type(e).__name__)
