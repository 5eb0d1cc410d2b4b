"""
Entry point for running the MCP server as a module: python -m mcp_server
"""

from .server import main

if __name__ == "__main__":
    main()
