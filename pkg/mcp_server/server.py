"""
skybench MCP server: UAV path planning on generated urban maps.

Exposes scenario validation, city generation, single planner runs and small
seeded benchmarks through the Model Context Protocol.
"""

import sys
from typing import Any, Dict

from mcp.server.fastmcp import FastMCP

from .registry import get_tool_summary, register_all_tools

SERVER_NAME = "skybench-mcp-server"


def create_mcp_server() -> FastMCP:
    mcp = FastMCP(SERVER_NAME)
    register_all_tools(mcp)
    return mcp


def main() -> None:
    """
    Main entry point for the MCP server (stdio transport).
    """
    try:
        print("[INFO] Starting skybench MCP Server...", file=sys.stderr)
        mcp = create_mcp_server()

        summary = get_tool_summary()
        print(f"[INFO] Server initialized: {summary['total_tools']} tools across "
              f"{len(summary['categories'])} categories", file=sys.stderr)
        print(f"[INFO] Planners: {', '.join(summary['core_capabilities']['planners'])}", file=sys.stderr)

        print("[SUCCESS] skybench MCP Server startup complete", file=sys.stderr)
        print("[INFO] Waiting for MCP client connection...", file=sys.stderr)
        mcp.run(transport="stdio")

    except KeyboardInterrupt:
        print("\n[INFO] skybench MCP Server shutdown requested", file=sys.stderr)
        sys.exit(0)
    except Exception as e:
        print(f"[ERROR] skybench MCP Server startup failed: {e}", file=sys.stderr)
        sys.exit(1)


def get_server_info() -> Dict[str, Any]:
    summary = get_tool_summary()
    return {
        "server_name": SERVER_NAME,
        "version": "0.1.0",
        "description": "UAV path planner benchmark for generated urban maps",
        "capabilities": summary["core_capabilities"],
        "tool_summary": summary,
        "supported_schemas": ["scenario", "planner-settings"],
        "transport": "stdio",
    }


if __name__ == "__main__":
    main()
