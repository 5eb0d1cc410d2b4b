"""
skybench MCP Server Package.

Scenario, city generation and path planning tools over the Model Context
Protocol.
"""

__version__ = "0.1.0"
__description__ = "UAV path planner benchmark with MCP integration"

from .server import main, create_mcp_server, get_server_info
from .registry import (
    register_all_tools,
    get_registered_tools,
    get_tool_count,
    get_tools_by_category,
    get_tool_summary,
)
from .shared import MCPErrorHandler, ResponseBuilder

__all__ = [
    "main",
    "create_mcp_server",
    "get_server_info",
    "register_all_tools",
    "get_registered_tools",
    "get_tool_count",
    "get_tools_by_category",
    "get_tool_summary",
    "MCPErrorHandler",
    "ResponseBuilder",
]
