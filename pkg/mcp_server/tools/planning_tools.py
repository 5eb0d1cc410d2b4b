"""
Planning tools for MCP server: single planner runs and small benchmarks.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

from mcp.server.fastmcp import FastMCP

from bench.aggregate import aggregate
from bench.csv_output import emit_csv, emit_summary_json
from bench.experiment_plan import default_plan
from bench.runner import run
from city.errors import CityError
from city.generator import GeneratorConfig, generate_city
from city.schema_validator import ScenarioValidator, validate_planner_settings
from evaluation.constraints import ConstraintSet
from evaluation.metrics import validate
from evaluation.timing import timed
from planners.common import PlannerError
from planners.registry import PlannerName, PlannerSettings, run_planner

from ..shared.error_handlers import MCPErrorHandler
from ..shared.response_builders import ResponseBuilder

MAX_TOOL_TRIALS = 20


def plan_scenario_path(scenario: Dict[str, Any], planner: str,
                       settings: Optional[Dict[str, Any]] = None,
                       seed: Optional[int] = None) -> Dict[str, Any]:
    try:
        name = PlannerName.parse(planner)
    except ValueError:
        return MCPErrorHandler.parameter_error("planner", planner, "string", "astar, rrtstar, pso")

    normalized, errors = ScenarioValidator().validate_and_normalize(scenario)
    if settings:
        errors += validate_planner_settings(settings)
    if errors:
        return MCPErrorHandler.validation_error(errors)

    try:
        spec = ScenarioValidator().load(normalized)
        planner_settings = PlannerSettings.from_dict(settings)
        if seed is not None:
            planner_settings = planner_settings.with_seed(seed)
        constraints = ConstraintSet.for_scenario(spec)
        city = generate_city(spec, GeneratorConfig(safety_margin=constraints.safety_margin))
        (path, stats), seconds = timed(run_planner, name, city, spec.start, spec.goal,
                                       planner_settings, constraints)
    except PlannerError as e:
        return MCPErrorHandler.planning_error(
            str(e),
            ["Try another planner", "Increase rrtstar.max_iterations or pso.iterations",
             "Lower obstacle_density"],
            type(e).__name__,
        )
    except (CityError, ValueError) as e:
        return MCPErrorHandler.validation_error([str(e)])

    metrics = validate(path, city, constraints)
    metrics.planning_time = seconds
    return ResponseBuilder.planning_response(path.to_dict(), metrics.to_dict(), stats.summary(), name.value)


def run_small_benchmark(scenario_ids: Optional[List[int]] = None,
                        planners: Optional[List[str]] = None,
                        trials: int = 3, base_seed: int = 0,
                        output_dir: Optional[str] = None) -> Dict[str, Any]:
    if not 1 <= trials <= MAX_TOOL_TRIALS:
        return MCPErrorHandler.parameter_error("trials", trials, "integer", f"1..{MAX_TOOL_TRIALS}")
    try:
        names = [PlannerName.parse(p) for p in planners] if planners else None
        plan = default_plan(base_seed=base_seed).restrict(scenario_ids, names, trials)
    except (KeyError, ValueError) as e:
        return MCPErrorHandler.parameter_error("scenario_ids/planners", str(e), "known ids and planner names")

    table = run(plan)
    summary = aggregate(table, strict=False)
    data: Dict[str, Any] = {"rows": table.to_frame().to_dict("records"), "summary": summary.to_dict()}
    if output_dir:
        try:
            files = emit_csv(table, summary, output_dir)
            files.append(emit_summary_json(summary, output_dir))
        except OSError as e:
            return MCPErrorHandler.file_operation_error("write", output_dir, str(e))
        data["files"] = [str(Path(f)) for f in files]
    return ResponseBuilder.success_response(data, metadata={"settings": plan.settings.to_dict(), "base_seed": plan.base_seed})


def register_planning_tools(mcp: FastMCP) -> None:
    """Register path planning and benchmark tools."""

    @mcp.tool()
    def plan_path(scenario: dict, planner: str = "astar",
                  settings: Optional[dict] = None, seed: Optional[int] = None) -> dict:
        """
        Plan a UAV path through the city of a scenario and score it.

        PLANNERS:
        - "astar": grid search on a 10 m voxel lattice, deterministic
        - "rrtstar": sampling-based tree with rewiring (seeded)
        - "pso": particle swarm over 5 interior waypoints (seeded)

        Args:
            scenario: Scenario dictionary (see validate_scenario)
            planner: Planner token
            settings: Optional planner settings {"astar": {...}, "rrtstar": {...}, "pso": {...}}
            seed: Seed for the stochastic planners

        Returns:
            Waypoints, metrics (length, turning sum, time, clearance, violations) and search stats
        """
        try:
            return plan_scenario_path(scenario, planner, settings, seed)
        except Exception as e:
            return MCPErrorHandler.planning_error(str(e), error_type=type(e).__name__)

    @mcp.tool()
    def run_benchmark(scenario_ids: Optional[List[int]] = None, planners: Optional[List[str]] = None,
                      trials: int = 3, base_seed: int = 0, output_dir: Optional[str] = None) -> dict:
        """
        Run a small seeded benchmark over the built-in scenarios.

        Args:
            scenario_ids: Subset of scenario ids 1..6 (default all)
            planners: Subset of planner tokens (default all)
            trials: Trials per (scenario, planner), 1..20
            base_seed: Root seed of every trial
            output_dir: Also write rows.csv, summary.csv and summary.json here

        Returns:
            Per-trial rows and the aggregated summary
        """
        try:
            return run_small_benchmark(scenario_ids, planners, trials, base_seed, output_dir)
        except Exception as e:
            return MCPErrorHandler.planning_error(str(e), error_type=type(e).__name__)
