"""
Shared utilities for MCP server components.
"""

from .error_handlers import MCPErrorHandler
from .response_builders import ResponseBuilder

__all__ = [
    "MCPErrorHandler",
    "ResponseBuilder",
]
