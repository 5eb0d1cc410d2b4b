"""
Centralized tool registration for MCP server.
"""

import sys
from typing import Any, Dict, List

from mcp.server.fastmcp import FastMCP

from .tools.planning_tools import register_planning_tools
from .tools.scenario_tools import register_scenario_tools


def register_all_tools(mcp: FastMCP) -> None:
    """
    Register all MCP tools with the server.

    Scenario tools come first since plan_path and run_benchmark take the
    documents they validate and list.

    Args:
        mcp: FastMCP server instance to register tools with
    """
    print("[INFO] Registering MCP tools...", file=sys.stderr)

    try:
        register_scenario_tools(mcp)
        print("  [SUCCESS] Scenario tools registered", file=sys.stderr)

        register_planning_tools(mcp)
        print("  [SUCCESS] Planning tools registered", file=sys.stderr)

        print("[SUCCESS] All MCP tools registered successfully", file=sys.stderr)

    except Exception as e:
        print(f"[ERROR] Tool registration failed: {e}", file=sys.stderr)
        raise


def get_registered_tools() -> Dict[str, List[str]]:
    """
    Tool names by category.

    Returns:
        Dictionary with tool categories as keys and tool name lists as values
    """
    return {
        "scenario": [
            "validate_scenario",
            "list_scenarios",
            "generate_city",
        ],
        "planning": [
            "plan_path",
            "run_benchmark",
        ],
    }


def get_tool_count() -> int:
    tools = get_registered_tools()
    return sum(len(tool_list) for tool_list in tools.values())


def get_tools_by_category(category: str) -> List[str]:
    """
    Get tools for a specific category.

    Raises:
        KeyError: If category doesn't exist
    """
    tools = get_registered_tools()
    if category not in tools:
        raise KeyError(f"Category '{category}' not found. Available: {list(tools.keys())}")
    return tools[category]


def get_tool_summary() -> Dict[str, Any]:
    tools = get_registered_tools()
    return {
        "total_tools": get_tool_count(),
        "categories": list(tools.keys()),
        "category_counts": {category: len(tool_list) for category, tool_list in tools.items()},
        "tools_by_category": tools,
        "core_capabilities": {
            "planners": ["astar", "rrtstar", "pso"],
            "metrics": ["path_length", "turning_sum", "planning_time", "min_clearance"],
            "scenarios": [1, 2, 3, 4, 5, 6],
        },
    }
