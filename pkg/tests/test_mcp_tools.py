import asyncio

import pytest

pytest.importorskip("mcp")

from mcp_server.registry import get_tool_count, get_tool_summary, get_tools_by_category  # noqa: E402
from mcp_server.server import create_mcp_server, get_server_info  # noqa: E402
from mcp_server.tools.planning_tools import plan_scenario_path, run_small_benchmark  # noqa: E402
from mcp_server.tools.scenario_tools import (  # noqa: E402
    generate_city_summary,
    list_default_scenarios,
    validate_scenario_document,
)


@pytest.fixture
def small_document():
    return {
        "scenario_id": 2,
        "map_size": [300, 300],
        "obstacle_density": 0.1,
        "max_building_height": 100,
        "start": [80, 150, 25],
        "goal": [220, 150, 25],
        "max_range": 200,
        "seed": 11,
    }


def test_validate_scenario_document(small_document):
    result = validate_scenario_document(small_document)
    assert result["valid"]
    assert result["errors"] == []
    assert result["normalized"]["max_altitude_delta"] == 30


def test_validate_scenario_document_reports_errors(small_document):
    small_document["scenario_id"] = 9
    result = validate_scenario_document(small_document)
    assert not result["valid"]
    assert any(e.startswith("scenario_id") for e in result["errors"])
    assert result["suggestions"]
    assert "normalized" not in result


def test_list_default_scenarios():
    result = list_default_scenarios()
    assert result["count"] == 6
    assert [s["scenario_id"] for s in result["items"]] == [1, 2, 3, 4, 5, 6]
    assert "re-sampled" in result["endpoint_placement"]


def test_generate_city_summary(small_document):
    result = generate_city_summary(small_document, include_obstacles=True)
    assert result["success"]
    assert result["building_count"] == len(result["city"]["obstacles"])
    assert abs(result["coverage"] - 0.1) <= 0.02


def test_generate_city_rejects_bad_documents(small_document):
    del small_document["start"]
    result = generate_city_summary(small_document)
    assert not result["success"]
    assert result["details"]


def test_plan_path_with_astar(small_document):
    result = plan_scenario_path(small_document, "astar")
    assert result["success"]
    assert result["planner"] == "astar"
    assert result["path"]["waypoints"][0] == [80.0, 150.0, 25.0]
    assert result["metrics"]["path_length"] >= 140.0
    assert result["stats"]["grid_dims"] == [30, 30, 10]


def test_plan_path_rejects_unknown_planner(small_document):
    result = plan_scenario_path(small_document, "dstar")
    assert not result["success"]
    assert result["parameter"] == "planner"


def test_plan_path_rejects_bad_settings(small_document):
    result = plan_scenario_path(small_document, "pso", settings={"pso": {"population": 1}})
    assert not result["success"]
    assert result["details"]


@pytest.mark.parametrize("kwargs, parameter", [
    ({"trials": 0}, "trials"),
    ({"trials": 21}, "trials"),
    ({"scenario_ids": [9], "trials": 1}, "scenario_ids/planners"),
    ({"planners": ["dstar"], "trials": 1}, "scenario_ids/planners"),
])
def test_benchmark_parameter_errors(kwargs, parameter):
    result = run_small_benchmark(**kwargs)
    assert not result["success"]
    assert result["parameter"] == parameter


def test_small_benchmark_writes_files(tmp_path):
    result = run_small_benchmark([2], ["astar"], trials=1, base_seed=1, output_dir=str(tmp_path))
    assert result["success"]
    assert len(result["rows"]) == 1
    assert result["metadata"]["base_seed"] == 1
    assert (tmp_path / "rows.csv").exists()
    assert (tmp_path / "summary.json").exists()


def test_registry_counts():
    assert get_tool_count() == 5
    assert get_tools_by_category("planning") == ["plan_path", "run_benchmark"]
    with pytest.raises(KeyError):
        get_tools_by_category("models")
    assert get_tool_summary()["total_tools"] == 5
    assert get_server_info()["server_name"] == "skybench-mcp-server"


def test_server_registers_every_tool():
    server = create_mcp_server()
    names = {tool.name for tool in asyncio.run(server.list_tools())}
    assert names == {"validate_scenario", "list_scenarios", "generate_city", "plan_path", "run_benchmark"}
